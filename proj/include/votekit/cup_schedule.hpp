#pragma once

#include <map>
#include <string>
#include <vector>

namespace votekit {

// Balanced binary knockout tree. Leaves hold candidate indices, every
// candidate exactly once; at each internal node the child leaf counts are
// ceil(s/2) and floor(s/2) of the node's s leaves.
struct CupSchedule {
    struct Node {
        int left = -1;   // node index, -1 for leaves
        int right = -1;
        int candidate = -1; // candidate index, -1 for internal nodes
    };

    std::vector<Node> nodes;
    int root = -1;

    bool is_leaf(int node) const { return nodes[node].left < 0; }
    int leaf_count(int node) const;
    int leaf_count() const { return root < 0 ? 0 : leaf_count(root); }

    // Structural equality, leaf order included.
    bool operator==(const CupSchedule& other) const;

    // Throws InputError unless the tree is balanced and covers exactly the
    // candidates 0..m-1 once each.
    void validate(int num_candidates) const;
};

// Canonical tree for m candidates: recursively put ceil(s/2) leaves on the
// left, floor(s/2) on the right; leaves carry 0..m-1 left to right.
CupSchedule canonical_schedule(int num_candidates);

// Nested-pair notation, e.g. "((a b) (c p))"; a single candidate is a bare
// label. label_to_index supplies the candidate numbering.
CupSchedule parse_cup_schedule(const std::string& text,
                               const std::map<std::string, int>& label_to_index);

std::string serialize_cup_schedule(const CupSchedule& schedule,
                                   const std::vector<std::string>& labels);

} // namespace votekit
