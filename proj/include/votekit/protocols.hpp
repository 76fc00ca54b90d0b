#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "votekit/ballots.hpp"
#include "votekit/rational.hpp"

namespace votekit {

// ---------------------------------------------------------------------------
// Tie semantics: every winner-determination routine returns the set of
// candidates that win under at least one resolution of all ties. "Wins
// adversarially" means the set is exactly {target}; "can win" means the
// target is a member. The set is never empty.
// ---------------------------------------------------------------------------

struct CandidateSet {
    std::uint32_t bits = 0;

    static CandidateSet single(int candidate) { return {std::uint32_t{1} << candidate}; }
    static CandidateSet all(int num_candidates) {
        return {num_candidates >= 32 ? ~std::uint32_t{0} : (std::uint32_t{1} << num_candidates) - 1};
    }

    bool contains(int candidate) const { return (bits >> candidate) & 1u; }
    void add(int candidate) { bits |= std::uint32_t{1} << candidate; }
    void remove(int candidate) { bits &= ~(std::uint32_t{1} << candidate); }
    int count() const { return __builtin_popcount(bits); }
    bool empty() const { return bits == 0; }
    bool is_singleton() const { return bits != 0 && (bits & (bits - 1)) == 0; }

    bool operator==(const CandidateSet&) const = default;

    // Members in increasing index order.
    std::vector<int> to_vector() const;
};

using Score = long long;
using ScoreTable = std::vector<Score>;

struct ScoredWinners {
    ScoreTable scores;
    CandidateSet winners; // argmax of the score table
};

// ---------------------------------------------------------------------------
// Evaluator: one profile, plus a stack of extra weighted votes that can be
// pushed and popped cheaply. Winner determination reads the incrementally
// maintained tallies, which keeps search loops out of O(votes) per node.
// ---------------------------------------------------------------------------

class Evaluator {
public:
    explicit Evaluator(const Profile& profile,
                       const std::vector<WeightedVote>& extra_votes = {});

    void push(const VoteOrder& order, long long weight);
    void pop();

    int num_candidates() const { return m_; }
    long long total_weight() const { return total_weight_; }
    const PairwiseMatrix& pairwise() const { return pairwise_; }

    ScoreTable borda_scores() const { return borda_; }
    ScoreTable copeland_scores() const;
    ScoreTable maximin_scores() const;

    // Plurality weight of each member of `alive` (other entries 0).
    ScoreTable plurality_tally(CandidateSet alive) const;

    // winners() dispatches on protocol; Cup needs the schedule.
    CandidateSet winners(Protocol protocol, const CupSchedule* schedule = nullptr) const;
    CandidateSet score_winners(Protocol protocol) const;
    // tie_seen, when given, reports whether any elimination round had to branch.
    CandidateSet stv_winners(bool* tie_seen = nullptr) const;
    CandidateSet cup_winners(const CupSchedule& schedule) const;

private:
    struct Group {
        VoteOrder order;
        long long weight;
    };
    struct PushedVote {
        int group;
        bool created;
        long long weight;
    };

    void add_vote(const VoteOrder& order, long long weight);
    void tally_into(std::uint32_t alive, long long* tally) const;
    CandidateSet stv_eliminate(std::uint32_t alive, bool* tie_seen) const;
    CandidateSet cup_play(const CupSchedule& schedule, int node) const;

    int m_;
    long long total_weight_ = 0;
    PairwiseMatrix pairwise_;
    ScoreTable borda_;
    std::vector<Group> groups_; // distinct orders with merged weight
    std::vector<PushedVote> stack_;
    // Plurality tally of the construction-time votes for every candidate
    // subset (small m only); pushed votes are added on top per query.
    std::vector<long long> base_tally_;

    // Scratch for the subset-memoized STV recursion; generation-stamped so
    // winners() needs no per-call allocation. Beyond 2^20 subsets the flat
    // arrays give way to a hash map.
    mutable std::vector<std::uint64_t> stv_seen_;
    mutable std::vector<CandidateSet> stv_memo_;
    mutable std::uint64_t stv_generation_ = 0;
    mutable std::unordered_map<std::uint32_t, CandidateSet> stv_spill_;
    mutable bool stv_flat_ = true;
};

// ---------------------------------------------------------------------------
// Free-function fronts over Evaluator
// ---------------------------------------------------------------------------

// protocol must be Borda, Copeland, or Maximin.
ScoredWinners score_winners(Protocol protocol, const Profile& profile,
                            const std::vector<WeightedVote>& extra_votes = {});

CandidateSet stv_winners(const Profile& profile,
                         const std::vector<WeightedVote>& extra_votes = {},
                         bool* tie_seen = nullptr);

ScoreTable plurality_tally(const Profile& profile,
                           const std::vector<WeightedVote>& extra_votes,
                           CandidateSet alive);

CandidateSet cup_winners(const Profile& profile,
                         const std::vector<WeightedVote>& extra_votes,
                         const CupSchedule& schedule);

// Any protocol except RandomizedCup, which has a distribution instead of a
// winner set.
CandidateSet winner_set(Protocol protocol, const Profile& profile,
                        const std::vector<WeightedVote>& extra_votes = {},
                        const CupSchedule* schedule = nullptr);

// Uniform draw over all m! assignments of candidates to the canonical
// balanced tree. probability[c] counts assignments whose winner set is
// exactly {c}; assignments that branch on a tie contribute to `ambiguous`.
// probability sums with ambiguous to exactly 1.
struct RandomizedCupDistribution {
    std::vector<Rational> probability;
    Rational ambiguous;
};

// Rejects m > 8 (8! evaluations is the cap).
RandomizedCupDistribution randomized_cup_distribution(const Profile& profile,
                                                      const std::vector<WeightedVote>& extra_votes = {});

// All m! vote orders in lexicographic order.
std::vector<VoteOrder> all_vote_orders(int num_candidates);

// The subset with `first` ranked first, still lexicographic.
std::vector<VoteOrder> vote_orders_topped_by(int num_candidates, int first);

std::string format_candidate_set(CandidateSet set, const Profile& profile);

} // namespace votekit
