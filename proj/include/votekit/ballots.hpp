#pragma once

#include <optional>
#include <string>
#include <vector>

#include "votekit/cup_schedule.hpp"
#include "votekit/errors.hpp"

namespace votekit {

// ---------------------------------------------------------------------------
// Core domain types. Everything is immutable after construction and safe to
// share across threads; all operations on these types are pure functions.
// ---------------------------------------------------------------------------

struct Candidate {
    int index = 0;      // 0-based ordinal, declaration order
    std::string label;  // short unique token, letters/digits
};

// A ranking of candidate indices, highest-ranked first. Always a permutation
// of 0..m-1: total order, no ties, no omissions.
using VoteOrder = std::vector<int>;

struct WeightedVote {
    VoteOrder order;
    long long weight = 0; // nonnegative; 0 is permitted (null manipulators)

    bool operator==(const WeightedVote&) const = default;
};

// The candidates plus the fixed (already cast) weighted votes.
struct Profile {
    std::vector<Candidate> candidates;
    std::vector<WeightedVote> fixed_votes;

    int num_candidates() const { return static_cast<int>(candidates.size()); }
    const std::string& label_of(int index) const { return candidates[index].label; }
    // -1 when unknown.
    int index_of(const std::string& label) const;

    bool operator==(const Profile& other) const;
};

enum class Mode { Constructive, Destructive };

struct ManipulationTarget {
    Mode mode = Mode::Constructive;
    int candidate = 0; // p when constructive, h when destructive

    bool operator==(const ManipulationTarget&) const = default;
};

// A profile plus the open coalition weights (one entry per open vote).
struct ManipulationInstance {
    Profile profile;
    std::vector<long long> coalition_weights;
    std::optional<ManipulationTarget> target;

    long long coalition_total() const;

    bool operator==(const ManipulationInstance&) const = default;
};

enum class Protocol { Borda, Copeland, Maximin, Stv, Cup, RandomizedCup };

const char* protocol_name(Protocol protocol);
Protocol parse_protocol(const std::string& name);

// One election file: protocol, instance, and the schedule when the protocol
// is Cup.
struct Election {
    Protocol protocol = Protocol::Borda;
    ManipulationInstance instance;
    std::optional<CupSchedule> schedule;

    bool operator==(const Election&) const = default;
};

// m x m grid; entry (i,j) is the total weight of votes ranking i above j.
// For i != j, entry(i,j) + entry(j,i) equals the total vote weight.
struct PairwiseMatrix {
    int m = 0;
    std::vector<long long> cells; // row-major

    explicit PairwiseMatrix(int num_candidates = 0)
        : m(num_candidates), cells(static_cast<std::size_t>(num_candidates) * num_candidates, 0) {}

    long long at(int i, int j) const { return cells[static_cast<std::size_t>(i) * m + j]; }
    long long& at(int i, int j) { return cells[static_cast<std::size_t>(i) * m + j]; }
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

// Line-oriented UTF-8 election format; '#' starts a comment:
//
//   protocol: borda|copeland|maximin|stv|cup|randomized-cup
//   candidates: <label> <label> ...
//   schedule: ((a b) (c p))        # required for cup, forbidden otherwise
//   fixed: <weight> : l1 > l2 > ... > lm
//   coalition: <weight>
//   target: constructive <label> | destructive <label>
//
// Candidate order is the order of declaration. Weights are nonnegative
// integers; anything else is rejected.
Election parse_election(const std::string& text);

// Inverse of parse_election: parse_election(serialize_election(e)) == e.
std::string serialize_election(const Election& election);

// Total weight preferring i over j across fixed votes plus extra_votes.
PairwiseMatrix pairwise_matrix(const Profile& profile,
                               const std::vector<WeightedVote>& extra_votes = {});

// True when `order` is a permutation of 0..m-1.
bool is_permutation_order(const VoteOrder& order, int num_candidates);

// "(a,p,b)" rendering used by CLI witnesses and error messages.
std::string format_order(const VoteOrder& order, const Profile& profile);

} // namespace votekit
