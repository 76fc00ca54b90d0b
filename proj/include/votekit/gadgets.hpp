#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "votekit/ballots.hpp"
#include "votekit/manipulate.hpp"
#include "votekit/uncertain.hpp"

namespace votekit {

// ---------------------------------------------------------------------------
// Number-partitioning instances and the subset-sum oracle they feed.
// ---------------------------------------------------------------------------

struct PartitionInstance {
    std::vector<long long> items; // positive integers

    long long total() const;
    // total / 2; only meaningful when the total is even.
    long long half() const { return total() / 2; }
};

struct PartitionAnswer {
    bool yes = false;
    std::vector<int> witness; // item indices summing to half(), when yes
};

inline constexpr long long kPartitionTableCap = 1'000'000;

// Pseudo-polynomial reachability table over sums 0..K with backtracked
// witness. Odd totals are answered no directly.
PartitionAnswer partition_oracle(const PartitionInstance& instance);

// ---------------------------------------------------------------------------
// Reduction gadget builders. Each turns a partition instance into an
// election whose manipulation answer matches the subset-sum answer.
// ---------------------------------------------------------------------------

enum class GadgetFamily { BordaCcwm, CopelandCcwm, MaximinCcwm, StvCcwm, StvDcwm };

const char* gadget_family_name(GadgetFamily family);
GadgetFamily parse_gadget_family(const std::string& name);

// Families other than StvDcwm; StvDcwm chains build_stv_destructive below.
Election build_gadget(GadgetFamily family, const PartitionInstance& partition);

// Wraps a 3-candidate constructive STV instance into a 4-candidate
// destructive one: appends candidate h at the bottom of every fixed vote,
// adds six unit votes plus a (h,...) bloc of weight W+5 where W is the
// combined weight of all input voters including the coalition.
Election build_stv_destructive(const Election& stv_ccwm);

// Constructive instance -> uncertain evaluation: fixed votes become
// degenerate marginals, coalition weights become uniform voters, r = 0.
UncertainEvaluationInstance lift_to_uncertain(const Election& ccwm);

// Adds a weight-0 manipulative voter; the decision provably matches the
// input's.
UncertainManipulationInstance add_null_manipulator(const UncertainEvaluationInstance& instance);

// Each weight-k voter becomes k perfectly correlated unit voters; the joint
// outcome distribution is preserved exactly. Rejects weight-0 voters.
UncertainEvaluationInstance unweight_with_correlation(const UncertainEvaluationInstance& instance);

// ---------------------------------------------------------------------------
// Equivalence harness: sample partitions, build the gadget, compare the
// manipulation solver against the subset-sum oracle.
// ---------------------------------------------------------------------------

struct TrialRecord {
    int trial = 0;
    std::vector<long long> items;
    bool oracle_yes = false;
    Decision solver = Decision::No;
    bool agree = false;
    unsigned long long nodes = 0;
};

struct EquivalenceReport {
    GadgetFamily family = GadgetFamily::BordaCcwm;
    std::vector<TrialRecord> trials;

    double agreement_rate() const;
    int exhausted_count() const;
    // Header: trial,items,oracle,solver,agree,nodes_expanded (items
    // space-separated).
    std::string to_csv() const;
};

struct VerifyOptions {
    int trials = 50;
    int max_items = 8;       // item count drawn uniformly in [1, max_items]
    long long max_value = 10; // values drawn uniformly in [1, max_value]
    std::uint64_t seed = 0;
    unsigned long long node_budget = kDefaultNodeBudget;
};

// Deterministic given the seed. Odd totals are fixed up by redrawing the
// last item.
EquivalenceReport verify_theorem(GadgetFamily family, const VerifyOptions& options);

// The harness's sampler, exposed so tests can pin trial inputs.
PartitionInstance sample_partition(std::mt19937_64& rng, int max_items, long long max_value);

} // namespace votekit
