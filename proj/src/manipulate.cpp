#include "votekit/manipulate.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <unordered_set>

namespace votekit {

const char* decision_name(Decision decision) {
    switch (decision) {
    case Decision::Yes: return "yes";
    case Decision::No: return "no";
    case Decision::ResourceExhausted: return "resource-exhausted";
    }
    return "?";
}

bool meets_target(CandidateSet winners, const ManipulationTarget& target) {
    if (target.mode == Mode::Constructive)
        return winners == CandidateSet::single(target.candidate);
    return !winners.contains(target.candidate);
}

std::vector<WeightedVote> witness_votes(const ManipulationInstance& instance,
                                        const std::vector<VoteOrder>& witness) {
    std::vector<WeightedVote> votes;
    for (std::size_t i = 0; i < witness.size(); ++i)
        votes.push_back({witness[i], instance.coalition_weights[i]});
    return votes;
}

namespace {

const ManipulationTarget& require_target(const ManipulationInstance& instance, Mode mode,
                                         const char* op) {
    if (!instance.target)
        throw InputError(std::string(op) + ": instance has no target");
    if (instance.target->mode != mode)
        throw InputError(std::string(op) + (mode == Mode::Constructive
                                                ? ": target must be constructive"
                                                : ": target must be destructive"));
    if (instance.target->candidate < 0 ||
        instance.target->candidate >= instance.profile.num_candidates())
        throw InputError(std::string(op) + ": target candidate out of range");
    return *instance.target;
}

// For Borda, Copeland, and Maximin, topping the preferred candidate never
// lowers its score and never raises any opponent's, so some manipulation
// with every coalition vote topped by p exists whenever any exists. The
// search space shrinks from m! to (m-1)! orders per voter.
bool p_top_is_sound(Protocol protocol) {
    return protocol == Protocol::Borda || protocol == Protocol::Copeland ||
           protocol == Protocol::Maximin;
}

struct AggregateKeyHash {
    std::size_t operator()(const std::vector<long long>& key) const {
        std::size_t h = 1469598103934665603ull;
        for (long long v : key) {
            h ^= static_cast<std::size_t>(v);
            h *= 1099511628211ull;
        }
        return h;
    }
};

constexpr std::size_t kMemoEntryCap = 1'000'000;

// C(n + types - 1, types - 1), saturating at UINT64_MAX.
unsigned long long multiset_count(long long n, std::size_t types) {
    unsigned long long result = 1;
    for (std::size_t i = 1; i < types; ++i) {
        unsigned __int128 next = static_cast<unsigned __int128>(result) *
                                 static_cast<unsigned long long>(n + static_cast<long long>(i));
        next /= i; // exact: result already holds C(n+i-1, i-1)
        if (next > static_cast<unsigned __int128>(~0ull))
            return ~0ull;
        result = static_cast<unsigned long long>(next);
    }
    return result;
}

// Depth-first assignment of coalition voters (descending weight) to vote
// order types, with memoized failure states keyed on the aggregate
// weight-per-type vector.
class ExactSearch {
public:
    ExactSearch(const ManipulationInstance& instance, Protocol protocol,
                const CupSchedule* schedule, unsigned long long budget,
                std::vector<VoteOrder> types)
        : instance_(instance), protocol_(protocol), schedule_(schedule), budget_(budget),
          types_(std::move(types)), eval_(instance.profile),
          aggregate_(types_.size(), 0) {
        const std::size_t n = instance.coalition_weights.size();
        order_.resize(n);
        std::iota(order_.begin(), order_.end(), 0);
        std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
            return instance.coalition_weights[a] > instance.coalition_weights[b];
        });
        assigned_.assign(n, 0);
    }

    ManipulationAnswer run() {
        ManipulationAnswer answer;
        const bool found = descend(0);
        answer.nodes = nodes_;
        if (found) {
            answer.decision = Decision::Yes;
            answer.witness.resize(order_.size());
            for (std::size_t k = 0; k < order_.size(); ++k)
                answer.witness[order_[k]] = types_[assigned_[k]];
        } else {
            answer.decision = exhausted_ ? Decision::ResourceExhausted : Decision::No;
        }
        return answer;
    }

private:
    bool leaf_success() {
        return meets_target(eval_.winners(protocol_, schedule_), *instance_.target);
    }

    bool descend(std::size_t k) {
        if (++nodes_ > budget_) {
            exhausted_ = true;
            return false;
        }
        if (k == order_.size())
            return leaf_success();

        const long long weight = instance_.coalition_weights[order_[k]];
        // Voters of equal weight are interchangeable; forcing their types to
        // be non-decreasing enumerates each multiset of assignments once.
        std::size_t start = 0;
        const bool tied_run =
            k > 0 && weight == instance_.coalition_weights[order_[k - 1]];
        if (tied_run)
            start = static_cast<std::size_t>(assigned_[k - 1]);

        std::vector<long long> key = aggregate_;
        key.push_back(static_cast<long long>(k));
        key.push_back(static_cast<long long>(start));
        if (memo_.count(key))
            return false;

        bool aborted = false;
        for (std::size_t t = start; t < types_.size(); ++t) {
            assigned_[k] = static_cast<int>(t);
            aggregate_[t] += weight;
            eval_.push(types_[t], weight);
            const bool found = descend(k + 1);
            eval_.pop();
            aggregate_[t] -= weight;
            if (found)
                return true;
            if (exhausted_) {
                aborted = true;
                break;
            }
        }
        if (!aborted && memo_.size() < kMemoEntryCap)
            memo_.insert(std::move(key));
        return false;
    }

    const ManipulationInstance& instance_;
    Protocol protocol_;
    const CupSchedule* schedule_;
    unsigned long long budget_;
    std::vector<VoteOrder> types_;
    Evaluator eval_;
    std::vector<long long> aggregate_;
    std::vector<std::size_t> order_; // voter indices, descending weight
    std::vector<int> assigned_;      // type index per sorted voter
    std::unordered_set<std::vector<long long>, AggregateKeyHash> memo_;
    unsigned long long nodes_ = 0;
    bool exhausted_ = false;
};

} // namespace

ManipulationAnswer solve_unweighted_coalition(const ManipulationInstance& instance,
                                              Protocol protocol,
                                              const CupSchedule* schedule) {
    if (!instance.target)
        throw InputError("solve_unweighted_coalition: instance has no target");
    const int m = instance.profile.num_candidates();
    if (m > 5)
        throw InputError("solve_unweighted_coalition handles at most 5 candidates "
                         "(m! vote types); use the weighted exact solver");
    for (long long w : instance.coalition_weights)
        if (w != 1)
            throw InputError("solve_unweighted_coalition requires unit coalition weights");
    if (protocol == Protocol::RandomizedCup)
        throw InputError("randomized-cup manipulation needs a probability threshold");

    const std::vector<VoteOrder> types = all_vote_orders(m);
    const std::size_t num_types = types.size();
    const long long n = static_cast<long long>(instance.coalition_weights.size());

    Evaluator eval(instance.profile);
    ManipulationAnswer answer;
    std::vector<long long> multiplicity(num_types, 0);
    multiplicity.back() = n;
    bool found = false;
    std::vector<long long> found_vector;

    // Walk the multiplicity vectors in ascending lexicographic order until
    // the first hit. `nodes` reports the full enumeration cardinality
    // C(n + m! - 1, m! - 1) either way.
    while (true) {
        ++answer.nodes;
        for (std::size_t t = 0; t < num_types; ++t)
            if (multiplicity[t] > 0)
                eval.push(types[t], multiplicity[t]);
        found = meets_target(eval.winners(protocol, schedule), *instance.target);
        for (std::size_t t = 0; t < num_types; ++t)
            if (multiplicity[t] > 0)
                eval.pop();
        if (found) {
            found_vector = multiplicity;
            answer.nodes = multiset_count(n, num_types);
            break;
        }

        // Successor: bump the rightmost position (before the last) that has
        // mass after it; everything past it collapses onto the last slot.
        std::size_t j = num_types - 1;
        long long suffix = 0;
        bool stepped = false;
        while (j > 0) {
            suffix += multiplicity[j];
            --j;
            if (suffix > 0) {
                ++multiplicity[j];
                for (std::size_t t = j + 1; t < num_types; ++t)
                    multiplicity[t] = 0;
                multiplicity[num_types - 1] = suffix - 1;
                stepped = true;
                break;
            }
        }
        if (!stepped)
            break;
    }

    if (found) {
        answer.decision = Decision::Yes;
        for (std::size_t t = 0; t < num_types; ++t)
            for (long long i = 0; i < found_vector[t]; ++i)
                answer.witness.push_back(types[t]);
    }
    return answer;
}

ManipulationAnswer solve_ccwm_exact(const ManipulationInstance& instance, Protocol protocol,
                                    const CupSchedule* schedule,
                                    unsigned long long node_budget) {
    const ManipulationTarget& target =
        require_target(instance, Mode::Constructive, "solve_ccwm_exact");
    if (protocol == Protocol::RandomizedCup)
        throw InputError("randomized-cup manipulation needs a probability threshold");
    if (protocol == Protocol::Cup) {
        if (!schedule)
            throw InputError("cup manipulation requires a schedule");
        schedule->validate(instance.profile.num_candidates());
    }
    const int m = instance.profile.num_candidates();
    std::vector<VoteOrder> types = p_top_is_sound(protocol)
                                       ? vote_orders_topped_by(m, target.candidate)
                                       : all_vote_orders(m);
    ExactSearch search(instance, protocol, schedule, node_budget, std::move(types));
    return search.run();
}

CupManipulationAnswer solve_cup_ccwm(const ManipulationInstance& instance,
                                     const CupSchedule& schedule) {
    const ManipulationTarget& target =
        require_target(instance, Mode::Constructive, "solve_cup_ccwm");
    const int m = instance.profile.num_candidates();
    schedule.validate(m);

    const PairwiseMatrix fixed = pairwise_matrix(instance.profile);
    const long long coalition = instance.coalition_total();

    // c defeats d for sure when the whole coalition weight is behind c.
    auto strict_beat = [&](int c, int d) {
        return checked_add(fixed.at(c, d), coalition) > fixed.at(d, c);
    };

    CupManipulationAnswer out;
    out.potential_winners.assign(schedule.nodes.size(), CandidateSet{});

    std::function<void(int)> propagate = [&](int node) {
        const CupSchedule::Node& n = schedule.nodes[node];
        if (schedule.is_leaf(node)) {
            out.potential_winners[node] = CandidateSet::single(n.candidate);
            return;
        }
        propagate(n.left);
        propagate(n.right);
        const CandidateSet left = out.potential_winners[n.left];
        const CandidateSet right = out.potential_winners[n.right];
        CandidateSet result;
        for (int c : left.to_vector())
            for (int d : right.to_vector())
                if (strict_beat(c, d))
                    result.add(c);
        for (int d : right.to_vector())
            for (int c : left.to_vector())
                if (strict_beat(d, c))
                    result.add(d);
        out.potential_winners[node] = result;
    };
    propagate(schedule.root);

    out.answer.nodes = schedule.nodes.size();
    if (!out.potential_winners[schedule.root].contains(target.candidate)) {
        out.answer.decision = Decision::No;
        return out;
    }
    out.answer.decision = Decision::Yes;

    // Witness ballot: at every node, rank the designated winner's half above
    // the sibling half led by a potential winner it strictly defeats.
    std::function<VoteOrder(int, int)> ballot_for = [&](int node, int winner) -> VoteOrder {
        const CupSchedule::Node& n = schedule.nodes[node];
        if (schedule.is_leaf(node))
            return {winner};
        const bool winner_left = [&] {
            std::function<bool(int)> holds = [&](int sub) {
                const CupSchedule::Node& s = schedule.nodes[sub];
                if (schedule.is_leaf(sub))
                    return s.candidate == winner;
                return holds(s.left) || holds(s.right);
            };
            return holds(n.left);
        }();
        const int own = winner_left ? n.left : n.right;
        const int sibling = winner_left ? n.right : n.left;
        int opponent = -1;
        for (int d : out.potential_winners[sibling].to_vector())
            if (strict_beat(winner, d)) {
                opponent = d;
                break;
            }
        VoteOrder order = ballot_for(own, winner);
        const VoteOrder tail = ballot_for(sibling, opponent);
        order.insert(order.end(), tail.begin(), tail.end());
        return order;
    };
    const VoteOrder ballot = ballot_for(schedule.root, target.candidate);
    out.answer.witness.assign(instance.coalition_weights.size(), ballot);
    return out;
}

ManipulationAnswer solve_dcwm_monotone(const ManipulationInstance& instance,
                                       Protocol protocol) {
    const ManipulationTarget& target =
        require_target(instance, Mode::Destructive, "solve_dcwm_monotone");
    if (!p_top_is_sound(protocol))
        throw InputError("solve_dcwm_monotone requires a monotone score protocol "
                         "(borda, copeland, maximin)");
    const int m = instance.profile.num_candidates();
    const int hated = target.candidate;

    ManipulationAnswer answer;
    for (int a = 0; a < m; ++a) {
        if (a == hated)
            continue;
        // (a, ...declaration order..., h) cast by every colluder.
        VoteOrder order;
        order.push_back(a);
        for (int c = 0; c < m; ++c)
            if (c != a && c != hated)
                order.push_back(c);
        order.push_back(hated);

        std::vector<WeightedVote> coalition;
        for (long long w : instance.coalition_weights)
            coalition.push_back({order, w});
        ++answer.nodes;
        const CandidateSet winners =
            score_winners(protocol, instance.profile, coalition).winners;
        if (!winners.contains(hated)) {
            answer.decision = Decision::Yes;
            answer.witness.assign(instance.coalition_weights.size(), order);
            return answer;
        }
    }
    answer.decision = Decision::No;
    return answer;
}

ManipulationAnswer solve_dcwm_via_ccwm(const ManipulationInstance& instance, Protocol protocol,
                                       const CupSchedule* schedule,
                                       unsigned long long node_budget) {
    const ManipulationTarget& target =
        require_target(instance, Mode::Destructive, "solve_dcwm_via_ccwm");
    const int m = instance.profile.num_candidates();

    ManipulationAnswer answer;
    bool exhausted = false;
    for (int p = 0; p < m; ++p) {
        if (p == target.candidate)
            continue;
        ManipulationInstance constructive = instance;
        constructive.target = ManipulationTarget{Mode::Constructive, p};
        ManipulationAnswer sub;
        if (protocol == Protocol::Cup) {
            if (!schedule)
                throw InputError("cup manipulation requires a schedule");
            sub = solve_cup_ccwm(constructive, *schedule).answer;
        } else {
            sub = solve_ccwm_exact(constructive, protocol, schedule, node_budget);
        }
        answer.nodes += sub.nodes;
        if (sub.decision == Decision::Yes) {
            answer.decision = Decision::Yes;
            answer.witness = std::move(sub.witness);
            return answer;
        }
        if (sub.decision == Decision::ResourceExhausted)
            exhausted = true;
    }
    answer.decision = exhausted ? Decision::ResourceExhausted : Decision::No;
    return answer;
}

} // namespace votekit
