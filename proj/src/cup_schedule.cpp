#include "votekit/cup_schedule.hpp"

#include <cctype>
#include <functional>

#include "votekit/errors.hpp"

namespace votekit {

int CupSchedule::leaf_count(int node) const {
    if (is_leaf(node))
        return 1;
    return leaf_count(nodes[node].left) + leaf_count(nodes[node].right);
}

bool CupSchedule::operator==(const CupSchedule& other) const {
    std::function<bool(int, int)> eq = [&](int a, int b) {
        const bool leaf_a = is_leaf(a);
        const bool leaf_b = other.is_leaf(b);
        if (leaf_a != leaf_b)
            return false;
        if (leaf_a)
            return nodes[a].candidate == other.nodes[b].candidate;
        return eq(nodes[a].left, other.nodes[b].left) &&
               eq(nodes[a].right, other.nodes[b].right);
    };
    if ((root < 0) != (other.root < 0))
        return false;
    return root < 0 || eq(root, other.root);
}

void CupSchedule::validate(int num_candidates) const {
    if (root < 0)
        throw InputError("schedule: empty tree");
    std::vector<bool> seen(num_candidates, false);
    std::function<int(int)> walk = [&](int node) -> int {
        const Node& n = nodes[node];
        if (is_leaf(node)) {
            if (n.candidate < 0 || n.candidate >= num_candidates)
                throw InputError("schedule: leaf candidate out of range");
            if (seen[n.candidate])
                throw InputError("schedule: candidate appears twice");
            seen[n.candidate] = true;
            return 1;
        }
        const int l = walk(n.left);
        const int r = walk(n.right);
        const int s = l + r;
        // The children must split the node's leaves as ceil(s/2), floor(s/2).
        if (l != (s + 1) / 2 && l != s / 2)
            throw InputError("schedule: tree is not balanced");
        return s;
    };
    const int total = walk(root);
    if (total != num_candidates)
        throw InputError("schedule: does not cover every candidate exactly once");
}

CupSchedule canonical_schedule(int num_candidates) {
    if (num_candidates < 1)
        throw InputError("schedule: need at least one candidate");
    CupSchedule schedule;
    std::function<int(int, int)> build = [&](int first, int count) -> int {
        CupSchedule::Node node;
        if (count == 1) {
            node.candidate = first;
        } else {
            const int left_count = (count + 1) / 2;
            node.left = build(first, left_count);
            node.right = build(first + left_count, count - left_count);
        }
        schedule.nodes.push_back(node);
        return static_cast<int>(schedule.nodes.size()) - 1;
    };
    schedule.root = build(0, num_candidates);
    return schedule;
}

namespace {

struct ScheduleParser {
    const std::string& text;
    const std::map<std::string, int>& labels;
    std::size_t pos = 0;
    CupSchedule out{};

    void skip_space() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
            ++pos;
    }

    int parse_node() {
        skip_space();
        if (pos >= text.size())
            throw InputError("schedule: unexpected end of input");
        CupSchedule::Node node;
        if (text[pos] == '(') {
            ++pos;
            node.left = parse_node();
            node.right = parse_node();
            skip_space();
            if (pos >= text.size() || text[pos] != ')')
                throw InputError("schedule: expected ')'");
            ++pos;
        } else {
            std::size_t start = pos;
            while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])) &&
                   text[pos] != '(' && text[pos] != ')')
                ++pos;
            const std::string label = text.substr(start, pos - start);
            auto it = labels.find(label);
            if (it == labels.end())
                throw InputError("schedule: unknown candidate '" + label + "'");
            node.candidate = it->second;
        }
        out.nodes.push_back(node);
        return static_cast<int>(out.nodes.size()) - 1;
    }
};

} // namespace

CupSchedule parse_cup_schedule(const std::string& text,
                               const std::map<std::string, int>& label_to_index) {
    ScheduleParser parser{text, label_to_index};
    parser.out.root = parser.parse_node();
    parser.skip_space();
    if (parser.pos != text.size())
        throw InputError("schedule: trailing characters after tree");
    parser.out.validate(static_cast<int>(label_to_index.size()));
    return parser.out;
}

std::string serialize_cup_schedule(const CupSchedule& schedule,
                                   const std::vector<std::string>& labels) {
    std::function<std::string(int)> write = [&](int node) -> std::string {
        const CupSchedule::Node& n = schedule.nodes[node];
        if (schedule.is_leaf(node))
            return labels[n.candidate];
        return "(" + write(n.left) + " " + write(n.right) + ")";
    };
    return write(schedule.root);
}

} // namespace votekit
