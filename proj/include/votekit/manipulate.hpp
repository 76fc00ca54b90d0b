#pragma once

#include <cstdint>
#include <vector>

#include "votekit/ballots.hpp"
#include "votekit/protocols.hpp"

namespace votekit {

// Yes answers always carry a witness that re-evaluates to the claimed
// outcome. ResourceExhausted is distinct from No: the search hit its node
// budget before covering the space.
enum class Decision { Yes, No, ResourceExhausted };

const char* decision_name(Decision decision);

struct ManipulationAnswer {
    Decision decision = Decision::No;
    // One order per coalition voter, aligned with coalition_weights. Empty
    // unless decision == Yes.
    std::vector<VoteOrder> witness;
    // Prop-1 solver: multiplicity vectors enumerated; weighted solvers:
    // search nodes expanded.
    unsigned long long nodes = 0;
};

// Success criteria under adversarial tie-breaking: constructive needs
// winner set == {p}; destructive needs h outside the winner set.
bool meets_target(CandidateSet winners, const ManipulationTarget& target);

inline constexpr unsigned long long kDefaultNodeBudget = 100'000'000ull;

// Enumerates every multiplicity vector of coalition votes over the m! order
// types, in lexicographic order, and returns the first that meets the
// target. All coalition weights must be 1 and m <= 5. `nodes` is the full
// enumeration cardinality C(n_T + m! - 1, m! - 1).
ManipulationAnswer solve_unweighted_coalition(const ManipulationInstance& instance,
                                              Protocol protocol,
                                              const CupSchedule* schedule = nullptr);

// Exact weighted-coalition search: depth-first assignment of each coalition
// weight to a vote order, voters in descending weight order, memoized on the
// aggregate weight-per-order vector. Constructive mode only.
ManipulationAnswer solve_ccwm_exact(const ManipulationInstance& instance,
                                    Protocol protocol,
                                    const CupSchedule* schedule = nullptr,
                                    unsigned long long node_budget = kDefaultNodeBudget);

// Potential-winner propagation up the schedule: a candidate can take a
// subelection iff it can take one of its children and strictly defeats some
// potential winner of the sibling with the whole coalition weight behind it.
// Complete whenever the total weight is odd (no pairwise tie is possible);
// yes answers are always witness-sound.
struct CupManipulationAnswer {
    ManipulationAnswer answer;
    // Indexed like schedule.nodes.
    std::vector<CandidateSet> potential_winners;
};

CupManipulationAnswer solve_cup_ccwm(const ManipulationInstance& instance,
                                     const CupSchedule& schedule);

// Destructive solver for monotone score protocols (Borda, Copeland,
// Maximin): try, for each candidate a != h, the uniform coalition ballot
// that tops a and bottoms h, with the other candidates in declaration order.
ManipulationAnswer solve_dcwm_monotone(const ManipulationInstance& instance,
                                       Protocol protocol);

// Destructive via constructive: yes iff some p != h can be made the unique
// winner. Sufficient for "h does not win", not necessary when only a tie
// among others can exclude h.
ManipulationAnswer solve_dcwm_via_ccwm(const ManipulationInstance& instance,
                                       Protocol protocol,
                                       const CupSchedule* schedule = nullptr,
                                       unsigned long long node_budget = kDefaultNodeBudget);

// Coalition votes aggregated per order type, for re-evaluation.
std::vector<WeightedVote> witness_votes(const ManipulationInstance& instance,
                                        const std::vector<VoteOrder>& witness);

} // namespace votekit
