#include "votekit/uncertain.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "votekit/rng.hpp"

namespace votekit {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b])))
        ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])))
        --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string token;
    while (in >> token)
        out.push_back(token);
    return out;
}

// Independent draw structure behind an instance: degenerate voters are fixed
// votes; every uniform correlation group (or lone uniform voter) is one draw
// with the members' summed weight behind it.
struct CompiledDistribution {
    Profile base; // candidates plus degenerate votes
    std::vector<long long> unit_weights;
};

void validate_distribution(const UncertainEvaluationInstance& instance) {
    const int m = instance.profile_candidates.num_candidates();
    if (m < 1)
        throw InputError("distribution: no candidates");
    if (instance.protocol == Protocol::RandomizedCup)
        throw InputError("distribution: vote uncertainty is defined for deterministic "
                         "protocols; use the randomized-cup manipulation solver instead");
    if (instance.protocol == Protocol::Cup) {
        if (!instance.schedule)
            throw InputError("distribution: cup requires a schedule");
        instance.schedule->validate(m);
    } else if (instance.schedule) {
        throw InputError("distribution: schedule is only valid for cup");
    }
    if (instance.target < 0 || instance.target >= m)
        throw InputError("distribution: target out of range");
    if (instance.threshold < 0 || instance.threshold > 1)
        throw InputError("distribution: threshold outside [0, 1]");
    for (const VoterDistribution& voter : instance.distribution.voters) {
        if (voter.weight < 0)
            throw InputError("distribution: negative voter weight");
        if (!voter.uniform && !is_permutation_order(voter.fixed_order, m))
            throw InputError("distribution: fixed vote is not a permutation");
    }
    const auto& voters = instance.distribution.voters;
    std::vector<bool> grouped(voters.size(), false);
    for (const auto& group : instance.distribution.correlation_groups) {
        if (group.size() < 2)
            throw InputError("distribution: correlation group needs at least two voters");
        for (int idx : group) {
            if (idx < 0 || idx >= static_cast<int>(voters.size()))
                throw InputError("distribution: correlation index out of range");
            if (grouped[idx])
                throw InputError("distribution: correlation groups must be disjoint");
            grouped[idx] = true;
        }
        const VoterDistribution& head = voters[group.front()];
        for (int idx : group) {
            if (voters[idx].weight != head.weight || voters[idx].uniform != head.uniform)
                throw InputError("distribution: group members must share weight and "
                                 "marginal kind");
            if (!head.uniform && voters[idx].fixed_order != head.fixed_order)
                throw InputError("distribution: a perfectly correlated degenerate group "
                                 "must share one vote");
        }
    }
}

CompiledDistribution compile(const UncertainEvaluationInstance& instance) {
    validate_distribution(instance);
    CompiledDistribution out;
    out.base.candidates = instance.profile_candidates.candidates;

    const auto& dist = instance.distribution;
    std::vector<int> group_of(dist.voters.size(), -1);
    for (std::size_t g = 0; g < dist.correlation_groups.size(); ++g)
        for (int idx : dist.correlation_groups[g])
            group_of[idx] = static_cast<int>(g);

    std::vector<long long> group_weight(dist.correlation_groups.size(), 0);
    for (std::size_t i = 0; i < dist.voters.size(); ++i) {
        const VoterDistribution& voter = dist.voters[i];
        if (!voter.uniform) {
            out.base.fixed_votes.push_back({voter.fixed_order, voter.weight});
        } else if (group_of[i] < 0) {
            out.unit_weights.push_back(voter.weight);
        } else {
            group_weight[group_of[i]] = checked_add(group_weight[group_of[i]], voter.weight);
        }
    }
    for (std::size_t g = 0; g < dist.correlation_groups.size(); ++g)
        if (dist.voters[dist.correlation_groups[g].front()].uniform)
            out.unit_weights.push_back(group_weight[g]);
    return out;
}

// Throws past 20! rather than wrapping; callers cap far below that anyway.
long long factorial(int n) {
    long long f = 1;
    for (int i = 2; i <= n; ++i)
        f = checked_mul(f, i);
    return f;
}

} // namespace

// ---------------------------------------------------------------------------
// Distribution files
// ---------------------------------------------------------------------------

DistributionFile parse_distribution(const std::string& text) {
    DistributionFile file;
    UncertainEvaluationInstance& inst = file.evaluation;
    bool have_protocol = false, have_candidates = false, have_target = false;
    std::map<std::string, int> label_to_index;
    std::string schedule_text;

    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string where = "line " + std::to_string(line_no) + ": ";
        if (auto hash = raw.find('#'); hash != std::string::npos)
            raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty())
            continue;
        const auto colon = line.find(':');
        if (colon == std::string::npos)
            throw InputError(where + "expected 'key: value'");
        const std::string key = trim(line.substr(0, colon));
        const std::string value = trim(line.substr(colon + 1));

        if (key == "protocol") {
            inst.protocol = parse_protocol(value);
            have_protocol = true;
        } else if (key == "candidates") {
            if (have_candidates)
                throw InputError(where + "duplicate candidates line");
            for (const std::string& label : split_ws(value)) {
                if (label_to_index.count(label))
                    throw InputError(where + "duplicate label '" + label + "'");
                const int index = static_cast<int>(inst.profile_candidates.candidates.size());
                label_to_index[label] = index;
                inst.profile_candidates.candidates.push_back({index, label});
            }
            have_candidates = true;
        } else if (key == "schedule") {
            if (!have_candidates)
                throw InputError(where + "schedule before candidates");
            schedule_text = value;
        } else if (key == "target") {
            auto it = label_to_index.find(value);
            if (it == label_to_index.end())
                throw InputError(where + "unknown candidate '" + value + "'");
            inst.target = it->second;
            have_target = true;
        } else if (key == "threshold") {
            inst.threshold = parse_probability(value);
        } else if (key == "voter") {
            const auto space = value.find_first_of(" \t");
            if (space == std::string::npos)
                throw InputError(where + "expected 'voter: <weight> fixed|uniform ...'");
            const std::string weight_token = value.substr(0, space);
            if (weight_token.empty() || weight_token[0] == '-' ||
                !std::all_of(weight_token.begin(), weight_token.end(),
                             [](unsigned char c) { return std::isdigit(c); }))
                throw InputError(where + "bad weight '" + weight_token + "'");
            VoterDistribution voter;
            try {
                voter.weight = std::stoll(weight_token);
            } catch (const std::out_of_range&) {
                throw InputError(where + "weight overflows");
            }
            std::string rest = trim(value.substr(space));
            if (rest == "uniform") {
                voter.uniform = true;
            } else if (rest.rfind("fixed", 0) == 0) {
                std::string ranking = trim(rest.substr(5));
                std::size_t start = 0;
                while (start <= ranking.size()) {
                    auto gt = ranking.find('>', start);
                    const std::string token =
                        trim(gt == std::string::npos ? ranking.substr(start)
                                                     : ranking.substr(start, gt - start));
                    auto it = label_to_index.find(token);
                    if (it == label_to_index.end())
                        throw InputError(where + "unknown candidate '" + token + "'");
                    voter.fixed_order.push_back(it->second);
                    if (gt == std::string::npos)
                        break;
                    start = gt + 1;
                }
            } else {
                throw InputError(where + "expected 'fixed' or 'uniform'");
            }
            inst.distribution.voters.push_back(std::move(voter));
        } else if (key == "correlate") {
            std::vector<int> group;
            for (const std::string& token : split_ws(value)) {
                if (!std::all_of(token.begin(), token.end(),
                                 [](unsigned char c) { return std::isdigit(c); }))
                    throw InputError(where + "bad voter index '" + token + "'");
                try {
                    group.push_back(std::stoi(token));
                } catch (const std::out_of_range&) {
                    throw InputError(where + "voter index '" + token + "' overflows");
                }
            }
            std::sort(group.begin(), group.end());
            inst.distribution.correlation_groups.push_back(std::move(group));
        } else if (key == "manipulator") {
            if (file.manipulator_weight)
                throw InputError(where + "duplicate manipulator line");
            if (value.empty() || value[0] == '-' ||
                !std::all_of(value.begin(), value.end(),
                             [](unsigned char c) { return std::isdigit(c); }))
                throw InputError(where + "bad manipulator weight '" + value + "'");
            try {
                file.manipulator_weight = std::stoll(value);
            } catch (const std::out_of_range&) {
                throw InputError(where + "manipulator weight overflows");
            }
        } else {
            throw InputError(where + "unknown key '" + key + "'");
        }
    }

    if (!have_protocol)
        throw InputError("missing protocol line");
    if (!have_candidates)
        throw InputError("missing candidates line");
    if (!have_target)
        throw InputError("missing target line");
    if (!schedule_text.empty())
        inst.schedule = parse_cup_schedule(schedule_text, label_to_index);
    std::sort(inst.distribution.correlation_groups.begin(),
              inst.distribution.correlation_groups.end());
    validate_distribution(inst);
    return file;
}

std::string serialize_distribution(const DistributionFile& file) {
    const UncertainEvaluationInstance& inst = file.evaluation;
    const Profile& profile = inst.profile_candidates;
    std::ostringstream out;
    out << "protocol: " << protocol_name(inst.protocol) << "\n";
    out << "candidates:";
    std::vector<std::string> labels;
    for (const Candidate& c : profile.candidates) {
        out << " " << c.label;
        labels.push_back(c.label);
    }
    out << "\n";
    if (inst.schedule)
        out << "schedule: " << serialize_cup_schedule(*inst.schedule, labels) << "\n";
    out << "target: " << profile.label_of(inst.target) << "\n";
    out << "threshold: " << rational_to_string(inst.threshold) << "\n";
    for (const VoterDistribution& voter : inst.distribution.voters) {
        out << "voter: " << voter.weight;
        if (voter.uniform) {
            out << " uniform\n";
        } else {
            out << " fixed ";
            for (std::size_t i = 0; i < voter.fixed_order.size(); ++i) {
                if (i)
                    out << " > ";
                out << profile.label_of(voter.fixed_order[i]);
            }
            out << "\n";
        }
    }
    auto groups = inst.distribution.correlation_groups;
    std::sort(groups.begin(), groups.end());
    for (const auto& group : groups) {
        out << "correlate:";
        for (int idx : group)
            out << " " << idx;
        out << "\n";
    }
    if (file.manipulator_weight)
        out << "manipulator: " << *file.manipulator_weight << "\n";
    return out.str();
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

ExactEvaluation evaluate_exact(const UncertainEvaluationInstance& instance) {
    const CompiledDistribution compiled = compile(instance);
    const int m = instance.profile_candidates.num_candidates();

    long long outcomes = 1;
    std::vector<VoteOrder> types;
    if (!compiled.unit_weights.empty()) {
        const long long orders_per_unit = factorial(m);
        if (orders_per_unit > kExactOutcomeCap)
            throw InputError("exact evaluation would enumerate more than 10^7 outcomes; "
                             "use the Monte Carlo evaluator");
        for (std::size_t u = 0; u < compiled.unit_weights.size(); ++u) {
            if (outcomes > kExactOutcomeCap / orders_per_unit)
                throw InputError("exact evaluation would enumerate more than 10^7 outcomes; "
                                 "use the Monte Carlo evaluator");
            outcomes *= orders_per_unit;
        }
        types = all_vote_orders(m);
    }
    Evaluator eval(compiled.base);
    const CupSchedule* schedule = instance.schedule ? &*instance.schedule : nullptr;
    const CandidateSet want = CandidateSet::single(instance.target);

    long long hits = 0;
    std::function<void(std::size_t)> enumerate = [&](std::size_t unit) {
        if (unit == compiled.unit_weights.size()) {
            if (eval.winners(instance.protocol, schedule) == want)
                ++hits;
            return;
        }
        for (const VoteOrder& order : types) {
            eval.push(order, compiled.unit_weights[unit]);
            enumerate(unit + 1);
            eval.pop();
        }
    };
    enumerate(0);

    ExactEvaluation out;
    out.probability = Rational(hits, outcomes);
    out.exceeds_threshold = out.probability > instance.threshold;
    out.outcomes = outcomes;
    return out;
}

MonteCarloEvaluation evaluate_montecarlo(const UncertainEvaluationInstance& instance,
                                         long long samples, std::uint64_t seed) {
    if (samples < 1)
        throw InputError("monte carlo evaluation needs at least one sample");
    const CompiledDistribution compiled = compile(instance);
    const int m = instance.profile_candidates.num_candidates();
    if (m > 8 && !compiled.unit_weights.empty())
        throw InputError("uniform marginals are capped at 8 candidates");
    const std::vector<VoteOrder> types =
        compiled.unit_weights.empty() ? std::vector<VoteOrder>{} : all_vote_orders(m);
    Evaluator eval(compiled.base);
    const CupSchedule* schedule = instance.schedule ? &*instance.schedule : nullptr;
    const CandidateSet want = CandidateSet::single(instance.target);

    std::mt19937_64 rng(seed);
    long long hits = 0;
    for (long long s = 0; s < samples; ++s) {
        for (long long weight : compiled.unit_weights)
            eval.push(types[draw_uniform(rng, 0, types.size() - 1)], weight);
        if (eval.winners(instance.protocol, schedule) == want)
            ++hits;
        for (std::size_t u = 0; u < compiled.unit_weights.size(); ++u)
            eval.pop();
    }

    MonteCarloEvaluation out;
    out.hits = hits;
    out.samples = samples;
    const double n = static_cast<double>(samples);
    const double p_hat = static_cast<double>(hits) / n;
    const double z = 1.959963984540054; // 95% normal quantile
    const double denom = 1.0 + z * z / n;
    const double center = (p_hat + z * z / (2.0 * n)) / denom;
    const double half =
        z * std::sqrt(p_hat * (1.0 - p_hat) / n + z * z / (4.0 * n * n)) / denom;
    out.estimate = p_hat;
    out.ci_low = std::max(0.0, center - half);
    out.ci_high = std::min(1.0, center + half);
    return out;
}

IndividualManipulationAnswer solve_uvcimw(const UncertainManipulationInstance& instance) {
    validate_distribution(instance.base);
    if (instance.manipulator_weight < 0)
        throw InputError("manipulator weight must be nonnegative");
    const int m = instance.base.profile_candidates.num_candidates();
    if (m > 8)
        throw InputError("individual manipulation search is capped at 8 candidates");

    IndividualManipulationAnswer best;
    bool first = true;
    for (const VoteOrder& order : all_vote_orders(m)) {
        UncertainEvaluationInstance with_vote = instance.base;
        with_vote.distribution.voters.push_back(
            {instance.manipulator_weight, false, order});
        const ExactEvaluation result = evaluate_exact(with_vote);
        // Strict improvement keeps the lexicographically smallest maximizer.
        if (first || result.probability > best.probability) {
            best.best_vote = order;
            best.probability = result.probability;
            first = false;
        }
    }
    best.exceeds_threshold = best.probability > instance.base.threshold;
    return best;
}

RandomizedCupManipulationAnswer
solve_uiccwm_randomized_cup(const ManipulationInstance& instance, const Rational& threshold,
                            unsigned long long node_budget) {
    if (!instance.target || instance.target->mode != Mode::Constructive)
        throw InputError("solve_uiccwm_randomized_cup needs a constructive target");
    if (threshold < 0 || threshold > 1)
        throw InputError("threshold outside [0, 1]");
    const int m = instance.profile.num_candidates();
    if (m > 5)
        throw InputError("randomized-cup coalition search is capped at 5 candidates");
    const int p = instance.target->candidate;

    const std::vector<VoteOrder> types = all_vote_orders(m);
    const std::size_t n = instance.coalition_weights.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return instance.coalition_weights[a] > instance.coalition_weights[b];
    });

    std::vector<WeightedVote> coalition;
    std::vector<int> assigned(n, 0);
    std::vector<int> best_assigned;
    std::vector<long long> aggregate(types.size(), 0);

    struct KeyHash {
        std::size_t operator()(const std::vector<long long>& key) const {
            std::size_t h = 1469598103934665603ull;
            for (long long v : key) {
                h ^= static_cast<std::size_t>(v);
                h *= 1099511628211ull;
            }
            return h;
        }
    };
    std::unordered_set<std::vector<long long>, KeyHash> memo;

    RandomizedCupManipulationAnswer out;
    out.achieved = Rational(-1);
    unsigned long long nodes = 0;
    bool exhausted = false;

    std::function<void(std::size_t)> descend = [&](std::size_t k) {
        if (exhausted || ++nodes > node_budget) {
            exhausted = true;
            return;
        }
        if (k == n) {
            const RandomizedCupDistribution dist =
                randomized_cup_distribution(instance.profile, coalition);
            if (dist.probability[p] > out.achieved) {
                out.achieved = dist.probability[p];
                best_assigned = assigned;
            }
            return;
        }
        const long long weight = instance.coalition_weights[order[k]];
        std::size_t start = 0;
        if (k > 0 && weight == instance.coalition_weights[order[k - 1]])
            start = static_cast<std::size_t>(assigned[k - 1]);
        std::vector<long long> key = aggregate;
        key.push_back(static_cast<long long>(k));
        key.push_back(static_cast<long long>(start));
        if (memo.count(key))
            return;
        for (std::size_t t = start; t < types.size(); ++t) {
            assigned[k] = static_cast<int>(t);
            aggregate[t] += weight;
            coalition.push_back({types[t], weight});
            descend(k + 1);
            coalition.pop_back();
            aggregate[t] -= weight;
            if (exhausted)
                return;
        }
        if (memo.size() < 1'000'000)
            memo.insert(std::move(key));
    };
    descend(0);

    out.answer.nodes = nodes;
    if (exhausted) {
        out.answer.decision = Decision::ResourceExhausted;
        if (out.achieved < 0)
            out.achieved = 0;
        return out;
    }
    if (out.achieved > threshold) {
        out.answer.decision = Decision::Yes;
        out.answer.witness.resize(n);
        for (std::size_t k = 0; k < n; ++k)
            out.answer.witness[order[k]] = types[best_assigned[k]];
    } else {
        out.answer.decision = Decision::No;
    }
    return out;
}

} // namespace votekit
