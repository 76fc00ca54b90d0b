#include "votekit/gadgets.hpp"

#include <algorithm>
#include <sstream>

#include "votekit/rng.hpp"

namespace votekit {

long long PartitionInstance::total() const {
    long long sum = 0;
    for (long long item : items)
        sum = checked_add(sum, item);
    return sum;
}

PartitionAnswer partition_oracle(const PartitionInstance& instance) {
    for (long long item : instance.items)
        if (item <= 0)
            throw InputError("partition items must be positive integers");
    const long long total = instance.total();
    if (total > kPartitionTableCap)
        throw InputError("partition items sum past the 10^6 table bound");

    PartitionAnswer answer;
    if (total % 2 != 0)
        return answer; // odd totals split evenly for nobody
    const long long half = total / 2;

    // reached_by[s] = index of the item whose pass first reached sum s
    // (-1 = start). First-writer wins, so backtracking strictly decreases
    // the item index and never reuses an item.
    std::vector<int> reached_by(half + 1, -2);
    reached_by[0] = -1;
    for (int i = 0; i < static_cast<int>(instance.items.size()); ++i) {
        const long long item = instance.items[i];
        for (long long s = half; s >= item; --s)
            if (reached_by[s] == -2 && reached_by[s - item] != -2)
                reached_by[s] = i;
    }
    if (reached_by[half] == -2)
        return answer;

    answer.yes = true;
    long long s = half;
    while (s > 0) {
        const int i = reached_by[s];
        answer.witness.push_back(i);
        s -= instance.items[i];
    }
    std::reverse(answer.witness.begin(), answer.witness.end());
    return answer;
}

// ---------------------------------------------------------------------------
// Gadget builders
// ---------------------------------------------------------------------------

const char* gadget_family_name(GadgetFamily family) {
    switch (family) {
    case GadgetFamily::BordaCcwm: return "borda-ccwm";
    case GadgetFamily::CopelandCcwm: return "copeland-ccwm";
    case GadgetFamily::MaximinCcwm: return "maximin-ccwm";
    case GadgetFamily::StvCcwm: return "stv-ccwm";
    case GadgetFamily::StvDcwm: return "stv-dcwm";
    }
    return "?";
}

GadgetFamily parse_gadget_family(const std::string& name) {
    if (name == "borda-ccwm") return GadgetFamily::BordaCcwm;
    if (name == "copeland-ccwm") return GadgetFamily::CopelandCcwm;
    if (name == "maximin-ccwm") return GadgetFamily::MaximinCcwm;
    if (name == "stv-ccwm") return GadgetFamily::StvCcwm;
    if (name == "stv-dcwm") return GadgetFamily::StvDcwm;
    throw InputError("unknown theorem family '" + name + "'");
}

namespace {

Profile make_profile(const std::vector<std::string>& labels) {
    Profile profile;
    for (const std::string& label : labels)
        profile.candidates.push_back({static_cast<int>(profile.candidates.size()), label});
    return profile;
}

// Order given by labels, resolved against the profile.
VoteOrder order_of(const Profile& profile, const std::vector<std::string>& labels) {
    VoteOrder order;
    for (const std::string& label : labels)
        order.push_back(profile.index_of(label));
    return order;
}

} // namespace

Election build_gadget(GadgetFamily family, const PartitionInstance& partition) {
    for (long long item : partition.items)
        if (item <= 0)
            throw InputError("partition items must be positive integers");
    const long long total = partition.total();
    if (total <= 0 || total % 2 != 0)
        throw InputError("gadget construction needs a positive even partition total");
    const long long half = total / 2; // the K every multiplicity scales with

    Election election;
    ManipulationInstance& inst = election.instance;

    switch (family) {
    case GadgetFamily::BordaCcwm: {
        election.protocol = Protocol::Borda;
        inst.profile = make_profile({"a", "b", "p"});
        inst.profile.fixed_votes = {
            {order_of(inst.profile, {"a", "b", "p"}), checked_mul(6, half) - 1},
            {order_of(inst.profile, {"b", "a", "p"}), checked_mul(6, half) - 1},
        };
        for (long long item : partition.items)
            inst.coalition_weights.push_back(checked_mul(6, item));
        inst.target = ManipulationTarget{Mode::Constructive, inst.profile.index_of("p")};
        break;
    }
    case GadgetFamily::CopelandCcwm: {
        election.protocol = Protocol::Copeland;
        inst.profile = make_profile({"a", "b", "c", "p"});
        inst.profile.fixed_votes = {
            {order_of(inst.profile, {"p", "a", "b", "c"}), checked_mul(2, half) + 2},
            {order_of(inst.profile, {"c", "p", "b", "a"}), checked_mul(2, half) + 2},
            {order_of(inst.profile, {"a", "b", "c", "p"}), half + 1},
            {order_of(inst.profile, {"b", "a", "c", "p"}), half + 1},
        };
        inst.coalition_weights = partition.items;
        inst.target = ManipulationTarget{Mode::Constructive, inst.profile.index_of("p")};
        break;
    }
    case GadgetFamily::MaximinCcwm: {
        election.protocol = Protocol::Maximin;
        inst.profile = make_profile({"a", "b", "c", "p"});
        inst.profile.fixed_votes = {
            {order_of(inst.profile, {"a", "b", "c", "p"}), checked_mul(7, half) - 1},
            {order_of(inst.profile, {"b", "c", "a", "p"}), checked_mul(7, half) - 1},
            {order_of(inst.profile, {"c", "a", "b", "p"}), checked_mul(4, half) - 1},
            {order_of(inst.profile, {"p", "c", "a", "b"}), checked_mul(5, half)},
        };
        for (long long item : partition.items)
            inst.coalition_weights.push_back(checked_mul(2, item));
        inst.target = ManipulationTarget{Mode::Constructive, inst.profile.index_of("p")};
        break;
    }
    case GadgetFamily::StvCcwm: {
        election.protocol = Protocol::Stv;
        inst.profile = make_profile({"a", "b", "p"});
        inst.profile.fixed_votes = {
            {order_of(inst.profile, {"b", "p", "a"}), checked_mul(6, half) - 1},
            {order_of(inst.profile, {"a", "b", "p"}), checked_mul(4, half)},
            {order_of(inst.profile, {"p", "a", "b"}), checked_mul(4, half)},
        };
        for (long long item : partition.items)
            inst.coalition_weights.push_back(checked_mul(2, item));
        inst.target = ManipulationTarget{Mode::Constructive, inst.profile.index_of("p")};
        break;
    }
    case GadgetFamily::StvDcwm:
        return build_stv_destructive(build_gadget(GadgetFamily::StvCcwm, partition));
    }
    return election;
}

Election build_stv_destructive(const Election& stv_ccwm) {
    const ManipulationInstance& source = stv_ccwm.instance;
    if (stv_ccwm.protocol != Protocol::Stv)
        throw InputError("build_stv_destructive expects an stv instance");
    if (source.profile.num_candidates() != 3)
        throw InputError("build_stv_destructive expects exactly 3 candidates");
    if (!source.target || source.target->mode != Mode::Constructive)
        throw InputError("build_stv_destructive expects a constructive target");
    if (source.profile.index_of("h") >= 0)
        throw InputError("build_stv_destructive: label 'h' is already taken");

    // Roles: p is the source target, a and b the others in declaration order.
    const int p = source.target->candidate;
    std::vector<int> others;
    for (int c = 0; c < 3; ++c)
        if (c != p)
            others.push_back(c);
    const int a = others[0];
    const int b = others[1];

    // Combined weight of every voter in the source, coalition included.
    long long w = 0;
    for (const WeightedVote& vote : source.profile.fixed_votes)
        w = checked_add(w, vote.weight);
    for (long long weight : source.coalition_weights)
        w = checked_add(w, weight);

    Election out;
    out.protocol = Protocol::Stv;
    out.instance.profile.candidates = source.profile.candidates;
    const int h = 3;
    out.instance.profile.candidates.push_back({h, "h"});

    // Source votes keep their order with h appended at the bottom.
    for (const WeightedVote& vote : source.profile.fixed_votes) {
        VoteOrder order = vote.order;
        order.push_back(h);
        out.instance.profile.fixed_votes.push_back({std::move(order), vote.weight});
    }
    // Six unit votes spread evenly over a, b, p while p remains, then the
    // large bloc that keeps h alive until the last round.
    const std::vector<VoteOrder> units = {
        {a, b, p, h}, {a, p, b, h}, {b, a, p, h}, {b, p, a, h}, {p, h, a, b}, {p, h, a, b}};
    for (const VoteOrder& order : units)
        out.instance.profile.fixed_votes.push_back({order, 1});
    out.instance.profile.fixed_votes.push_back(
        {{h, a, b, p}, checked_add(w, 5)});

    out.instance.coalition_weights = source.coalition_weights;
    out.instance.target = ManipulationTarget{Mode::Destructive, h};
    return out;
}

// ---------------------------------------------------------------------------
// Uncertainty lifts
// ---------------------------------------------------------------------------

UncertainEvaluationInstance lift_to_uncertain(const Election& ccwm) {
    if (!ccwm.instance.target || ccwm.instance.target->mode != Mode::Constructive)
        throw InputError("lift_to_uncertain expects a constructive target");
    if (ccwm.protocol == Protocol::RandomizedCup)
        throw InputError("lift_to_uncertain expects a deterministic protocol");

    UncertainEvaluationInstance out;
    out.profile_candidates.candidates = ccwm.instance.profile.candidates;
    out.protocol = ccwm.protocol;
    out.schedule = ccwm.schedule;
    out.target = ccwm.instance.target->candidate;
    out.threshold = Rational(0);
    for (const WeightedVote& vote : ccwm.instance.profile.fixed_votes)
        out.distribution.voters.push_back({vote.weight, false, vote.order});
    for (long long weight : ccwm.instance.coalition_weights)
        out.distribution.voters.push_back({weight, true, {}});
    return out;
}

UncertainManipulationInstance add_null_manipulator(const UncertainEvaluationInstance& instance) {
    UncertainManipulationInstance out;
    out.base = instance;
    out.manipulator_weight = 0;
    return out;
}

UncertainEvaluationInstance unweight_with_correlation(const UncertainEvaluationInstance& instance) {
    UncertainEvaluationInstance out;
    out.profile_candidates = instance.profile_candidates;
    out.protocol = instance.protocol;
    out.schedule = instance.schedule;
    out.target = instance.target;
    out.threshold = instance.threshold;

    const auto& voters = instance.distribution.voters;
    std::vector<int> group_of(voters.size(), -1);
    for (std::size_t g = 0; g < instance.distribution.correlation_groups.size(); ++g)
        for (int idx : instance.distribution.correlation_groups[g])
            group_of[idx] = static_cast<int>(g);

    // clones[i] = unit-voter indices that voter i expands to.
    std::vector<std::vector<int>> clones(voters.size());
    for (std::size_t i = 0; i < voters.size(); ++i) {
        const VoterDistribution& voter = voters[i];
        if (voter.weight < 1)
            throw InputError("unweight_with_correlation: weight-0 voters have no "
                             "unweighted counterpart");
        for (long long k = 0; k < voter.weight; ++k) {
            clones[i].push_back(static_cast<int>(out.distribution.voters.size()));
            out.distribution.voters.push_back({1, voter.uniform, voter.fixed_order});
        }
    }

    // A voter's clones share one draw; clones of voters that were already
    // correlated merge into a single group.
    std::vector<bool> consumed(voters.size(), false);
    for (std::size_t i = 0; i < voters.size(); ++i) {
        if (consumed[i])
            continue;
        std::vector<int> group;
        if (group_of[i] < 0) {
            group = clones[i];
            consumed[i] = true;
        } else {
            for (int member : instance.distribution.correlation_groups[group_of[i]]) {
                group.insert(group.end(), clones[member].begin(), clones[member].end());
                consumed[member] = true;
            }
        }
        if (group.size() >= 2) {
            std::sort(group.begin(), group.end());
            out.distribution.correlation_groups.push_back(std::move(group));
        }
    }
    std::sort(out.distribution.correlation_groups.begin(),
              out.distribution.correlation_groups.end());
    return out;
}

// ---------------------------------------------------------------------------
// Equivalence harness
// ---------------------------------------------------------------------------

double EquivalenceReport::agreement_rate() const {
    if (trials.empty())
        return 1.0;
    long long agreed = 0;
    for (const TrialRecord& trial : trials)
        agreed += trial.agree ? 1 : 0;
    return static_cast<double>(agreed) / static_cast<double>(trials.size());
}

int EquivalenceReport::exhausted_count() const {
    int count = 0;
    for (const TrialRecord& trial : trials)
        count += trial.solver == Decision::ResourceExhausted ? 1 : 0;
    return count;
}

std::string EquivalenceReport::to_csv() const {
    std::ostringstream out;
    out << "trial,items,oracle,solver,agree,nodes_expanded\n";
    for (const TrialRecord& trial : trials) {
        out << trial.trial << ",";
        for (std::size_t i = 0; i < trial.items.size(); ++i) {
            if (i)
                out << " ";
            out << trial.items[i];
        }
        out << "," << (trial.oracle_yes ? "yes" : "no") << ","
            << decision_name(trial.solver) << "," << (trial.agree ? 1 : 0) << ","
            << trial.nodes << "\n";
    }
    return out.str();
}

PartitionInstance sample_partition(std::mt19937_64& rng, int max_items, long long max_value) {
    if (max_items < 1 || max_value < 1)
        throw InputError("partition sampling bounds must be positive");
    PartitionInstance partition;
    const int count = static_cast<int>(draw_uniform(rng, 1, max_items));
    for (int i = 0; i < count; ++i)
        partition.items.push_back(static_cast<long long>(draw_uniform(rng, 1, max_value)));
    // Even totals only; redraw the last item until parity cooperates.
    if (max_value < 2) {
        if (partition.total() % 2 != 0)
            partition.items.push_back(1);
        return partition;
    }
    while (partition.total() % 2 != 0)
        partition.items.back() = static_cast<long long>(draw_uniform(rng, 1, max_value));
    return partition;
}

EquivalenceReport verify_theorem(GadgetFamily family, const VerifyOptions& options) {
    EquivalenceReport report;
    report.family = family;
    std::mt19937_64 rng(options.seed);

    for (int t = 0; t < options.trials; ++t) {
        const PartitionInstance partition =
            sample_partition(rng, options.max_items, options.max_value);

        TrialRecord record;
        record.trial = t;
        record.items = partition.items;
        record.oracle_yes = partition_oracle(partition).yes;

        const Election gadget = build_gadget(family, partition);
        ManipulationAnswer solved;
        if (family == GadgetFamily::StvDcwm)
            solved = solve_dcwm_via_ccwm(gadget.instance, gadget.protocol, nullptr,
                                         options.node_budget);
        else
            solved = solve_ccwm_exact(gadget.instance, gadget.protocol, nullptr,
                                      options.node_budget);
        record.solver = solved.decision;
        record.nodes = solved.nodes;
        record.agree = (record.oracle_yes && solved.decision == Decision::Yes) ||
                       (!record.oracle_yes && solved.decision == Decision::No);
        report.trials.push_back(std::move(record));
    }
    return report;
}

} // namespace votekit
