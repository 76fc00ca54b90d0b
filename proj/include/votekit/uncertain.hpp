#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "votekit/ballots.hpp"
#include "votekit/manipulate.hpp"
#include "votekit/protocols.hpp"
#include "votekit/rational.hpp"

namespace votekit {

// ---------------------------------------------------------------------------
// Vote uncertainty: each voter has a weight and a marginal that is either
// degenerate at one order or uniform over all m! orders. Correlation groups
// are disjoint sets of voters whose draws are identical with probability
// one; members share weight and marginal kind.
// ---------------------------------------------------------------------------

struct VoterDistribution {
    long long weight = 0;
    bool uniform = false;
    VoteOrder fixed_order; // meaningful when !uniform

    bool operator==(const VoterDistribution&) const = default;
};

struct VoteDistribution {
    std::vector<VoterDistribution> voters;
    std::vector<std::vector<int>> correlation_groups; // voter indices, each group sorted

    bool operator==(const VoteDistribution&) const = default;
};

struct UncertainEvaluationInstance {
    Profile profile_candidates; // fixed_votes unused; candidates carry labels
    Protocol protocol = Protocol::Borda;
    std::optional<CupSchedule> schedule; // required for cup
    int target = 0;                      // p
    Rational threshold;                  // r in [0, 1]
    VoteDistribution distribution;

    bool operator==(const UncertainEvaluationInstance&) const = default;
};

struct UncertainManipulationInstance {
    UncertainEvaluationInstance base;
    long long manipulator_weight = 0; // the manipulator is not in any group

    bool operator==(const UncertainManipulationInstance&) const = default;
};

// ---------------------------------------------------------------------------
// Distribution file, line-oriented UTF-8, '#' comments:
//
//   protocol: borda
//   candidates: a b p
//   schedule: ((a b) (c p))      # cup only
//   target: p
//   threshold: 1/3
//   voter: <weight> fixed l1 > l2 > ...
//   voter: <weight> uniform
//   correlate: <voter-index> <voter-index> ...
//   manipulator: <weight>        # present iff this is a manipulation instance
// ---------------------------------------------------------------------------

struct DistributionFile {
    UncertainEvaluationInstance evaluation;
    std::optional<long long> manipulator_weight;

    bool operator==(const DistributionFile&) const = default;
};

DistributionFile parse_distribution(const std::string& text);
std::string serialize_distribution(const DistributionFile& file);

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

inline constexpr long long kExactOutcomeCap = 10'000'000;

struct ExactEvaluation {
    Rational probability;      // P(winner set is exactly {p}); ties count against p
    bool exceeds_threshold;    // probability > r, strict
    long long outcomes = 0;    // product of supports enumerated
};

// Enumerates the product of the independent draws (correlation groups count
// once). Rejects instances whose outcome count exceeds kExactOutcomeCap;
// use evaluate_montecarlo for those.
ExactEvaluation evaluate_exact(const UncertainEvaluationInstance& instance);

struct MonteCarloEvaluation {
    double estimate = 0.0;
    double ci_low = 0.0;   // 95% Wilson score interval
    double ci_high = 0.0;
    long long hits = 0;
    long long samples = 0;
};

// Seeded and deterministic: same seed, same estimate.
MonteCarloEvaluation evaluate_montecarlo(const UncertainEvaluationInstance& instance,
                                         long long samples, std::uint64_t seed);

struct IndividualManipulationAnswer {
    VoteOrder best_vote; // lexicographically smallest among maximizers
    Rational probability;
    bool exceeds_threshold = false;
};

// Maximizes evaluate_exact over the manipulator's m! possible orders.
IndividualManipulationAnswer solve_uvcimw(const UncertainManipulationInstance& instance);

struct RandomizedCupManipulationAnswer {
    ManipulationAnswer answer;
    Rational achieved; // best winning probability over all coalition votes
};

// Coalition manipulation when the schedule is drawn uniformly after the
// votes: search coalition assignments as in solve_ccwm_exact, score each by
// the target's randomized-cup probability, decide max > r. m <= 5.
RandomizedCupManipulationAnswer
solve_uiccwm_randomized_cup(const ManipulationInstance& instance, const Rational& threshold,
                            unsigned long long node_budget = kDefaultNodeBudget);

} // namespace votekit
