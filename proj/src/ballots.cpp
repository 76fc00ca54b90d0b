#include "votekit/ballots.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace votekit {

namespace {

constexpr int kMaxCandidates = 26;
constexpr std::size_t kMaxLabelLength = 8;

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

bool valid_label(const std::string& label) {
    if (label.empty() || label.size() > kMaxLabelLength)
        return false;
    return std::all_of(label.begin(), label.end(), [](unsigned char c) {
        return std::isalnum(c);
    });
}

long long parse_weight(const std::string& token, int line_no) {
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (token.empty())
        throw InputError(where + "missing weight");
    if (token[0] == '-')
        throw InputError(where + "negative weight '" + token + "'");
    if (!std::all_of(token.begin(), token.end(), [](unsigned char c) { return std::isdigit(c); }))
        throw InputError(where + "weight '" + token + "' is not a nonnegative integer");
    try {
        return std::stoll(token);
    } catch (const std::out_of_range&) {
        throw InputError(where + "weight '" + token + "' overflows");
    }
}

} // namespace

int Profile::index_of(const std::string& label) const {
    for (const Candidate& c : candidates)
        if (c.label == label)
            return c.index;
    return -1;
}

bool Profile::operator==(const Profile& other) const {
    if (candidates.size() != other.candidates.size() ||
        fixed_votes != other.fixed_votes)
        return false;
    for (std::size_t i = 0; i < candidates.size(); ++i)
        if (candidates[i].index != other.candidates[i].index ||
            candidates[i].label != other.candidates[i].label)
            return false;
    return true;
}

long long ManipulationInstance::coalition_total() const {
    long long total = 0;
    for (long long w : coalition_weights)
        total = checked_add(total, w);
    return total;
}

const char* protocol_name(Protocol protocol) {
    switch (protocol) {
    case Protocol::Borda: return "borda";
    case Protocol::Copeland: return "copeland";
    case Protocol::Maximin: return "maximin";
    case Protocol::Stv: return "stv";
    case Protocol::Cup: return "cup";
    case Protocol::RandomizedCup: return "randomized-cup";
    }
    return "?";
}

Protocol parse_protocol(const std::string& name) {
    if (name == "borda") return Protocol::Borda;
    if (name == "copeland") return Protocol::Copeland;
    if (name == "maximin") return Protocol::Maximin;
    if (name == "stv") return Protocol::Stv;
    if (name == "cup") return Protocol::Cup;
    if (name == "randomized-cup") return Protocol::RandomizedCup;
    throw InputError("unknown protocol '" + name + "'");
}

bool is_permutation_order(const VoteOrder& order, int num_candidates) {
    if (static_cast<int>(order.size()) != num_candidates)
        return false;
    std::uint32_t seen = 0;
    for (int c : order) {
        if (c < 0 || c >= num_candidates || ((seen >> c) & 1u))
            return false;
        seen |= std::uint32_t{1} << c;
    }
    return true;
}

std::string format_order(const VoteOrder& order, const Profile& profile) {
    std::string out = "(";
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (i)
            out += ",";
        out += profile.label_of(order[i]);
    }
    out += ")";
    return out;
}

Election parse_election(const std::string& text) {
    Election election;
    bool have_protocol = false;
    bool have_candidates = false;
    bool have_target = false;
    std::map<std::string, int> label_to_index;
    std::string schedule_text;
    long long weight_total = 0;

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
            if (have_protocol)
                throw InputError(where + "duplicate protocol line");
            election.protocol = parse_protocol(value);
            have_protocol = true;
        } else if (key == "candidates") {
            if (have_candidates)
                throw InputError(where + "duplicate candidates line");
            const auto labels = split_ws(value);
            if (labels.empty())
                throw InputError(where + "no candidates declared");
            if (static_cast<int>(labels.size()) > kMaxCandidates)
                throw InputError(where + "more than 26 candidates");
            for (const std::string& label : labels) {
                if (!valid_label(label))
                    throw InputError(where + "bad label '" + label +
                                     "' (letters/digits, at most 8 characters)");
                if (label_to_index.count(label))
                    throw InputError(where + "duplicate label '" + label + "'");
                const int index = static_cast<int>(election.instance.profile.candidates.size());
                label_to_index[label] = index;
                election.instance.profile.candidates.push_back({index, label});
            }
            have_candidates = true;
        } else if (key == "schedule") {
            if (!schedule_text.empty())
                throw InputError(where + "duplicate schedule line");
            if (!have_candidates)
                throw InputError(where + "schedule before candidates");
            schedule_text = value;
        } else if (key == "fixed") {
            if (!have_candidates)
                throw InputError(where + "vote before candidates");
            const auto second_colon = value.find(':');
            if (second_colon == std::string::npos)
                throw InputError(where + "expected 'fixed: <weight> : <ranking>'");
            const long long weight = parse_weight(trim(value.substr(0, second_colon)), line_no);
            std::string ranking_text = value.substr(second_colon + 1);
            // Ranking tokens are separated by '>'.
            VoteOrder order;
            std::size_t start = 0;
            while (start <= ranking_text.size()) {
                auto gt = ranking_text.find('>', start);
                const std::string token =
                    trim(gt == std::string::npos ? ranking_text.substr(start)
                                                 : ranking_text.substr(start, gt - start));
                if (token.empty())
                    throw InputError(where + "empty entry in ranking");
                auto it = label_to_index.find(token);
                if (it == label_to_index.end())
                    throw InputError(where + "unknown candidate '" + token + "'");
                order.push_back(it->second);
                if (gt == std::string::npos)
                    break;
                start = gt + 1;
            }
            if (!is_permutation_order(order, election.instance.profile.num_candidates()))
                throw InputError(where + "ranking is not a permutation of the candidates");
            weight_total = checked_add(weight_total, weight);
            election.instance.profile.fixed_votes.push_back({std::move(order), weight});
        } else if (key == "coalition") {
            const long long weight = parse_weight(value, line_no);
            weight_total = checked_add(weight_total, weight);
            election.instance.coalition_weights.push_back(weight);
        } else if (key == "target") {
            if (have_target)
                throw InputError(where + "duplicate target line");
            if (!have_candidates)
                throw InputError(where + "target before candidates");
            const auto parts = split_ws(value);
            if (parts.size() != 2)
                throw InputError(where + "expected 'target: constructive|destructive <label>'");
            ManipulationTarget target;
            if (parts[0] == "constructive")
                target.mode = Mode::Constructive;
            else if (parts[0] == "destructive")
                target.mode = Mode::Destructive;
            else
                throw InputError(where + "unknown mode '" + parts[0] + "'");
            auto it = label_to_index.find(parts[1]);
            if (it == label_to_index.end())
                throw InputError(where + "unknown candidate '" + parts[1] + "'");
            target.candidate = it->second;
            election.instance.target = target;
            have_target = true;
        } else {
            throw InputError(where + "unknown key '" + key + "'");
        }
    }

    if (!have_protocol)
        throw InputError("missing protocol line");
    if (!have_candidates)
        throw InputError("missing candidates line");
    if (election.protocol == Protocol::Cup) {
        if (schedule_text.empty())
            throw InputError("cup elections require a schedule line");
        election.schedule = parse_cup_schedule(schedule_text, label_to_index);
    } else if (!schedule_text.empty()) {
        throw InputError("schedule line is only valid for the cup protocol");
    }
    return election;
}

std::string serialize_election(const Election& election) {
    const Profile& profile = election.instance.profile;
    std::ostringstream out;
    out << "protocol: " << protocol_name(election.protocol) << "\n";
    out << "candidates:";
    std::vector<std::string> labels;
    for (const Candidate& c : profile.candidates) {
        out << " " << c.label;
        labels.push_back(c.label);
    }
    out << "\n";
    if (election.schedule)
        out << "schedule: " << serialize_cup_schedule(*election.schedule, labels) << "\n";
    for (const WeightedVote& vote : profile.fixed_votes) {
        out << "fixed: " << vote.weight << " : ";
        for (std::size_t i = 0; i < vote.order.size(); ++i) {
            if (i)
                out << " > ";
            out << profile.label_of(vote.order[i]);
        }
        out << "\n";
    }
    for (long long w : election.instance.coalition_weights)
        out << "coalition: " << w << "\n";
    if (election.instance.target) {
        out << "target: "
            << (election.instance.target->mode == Mode::Constructive ? "constructive"
                                                                     : "destructive")
            << " " << profile.label_of(election.instance.target->candidate) << "\n";
    }
    return out.str();
}

PairwiseMatrix pairwise_matrix(const Profile& profile,
                               const std::vector<WeightedVote>& extra_votes) {
    const int m = profile.num_candidates();
    PairwiseMatrix matrix(m);
    long long total = 0;
    auto accumulate = [&](const WeightedVote& vote) {
        if (!is_permutation_order(vote.order, m))
            throw InputError("pairwise matrix: vote is not a permutation of the candidates");
        if (vote.weight < 0)
            throw InputError("pairwise matrix: negative weight");
        total = checked_add(total, vote.weight);
        for (std::size_t hi = 0; hi < vote.order.size(); ++hi)
            for (std::size_t lo = hi + 1; lo < vote.order.size(); ++lo) {
                long long& cell = matrix.at(vote.order[hi], vote.order[lo]);
                cell = checked_add(cell, vote.weight);
            }
    };
    for (const WeightedVote& vote : profile.fixed_votes)
        accumulate(vote);
    for (const WeightedVote& vote : extra_votes)
        accumulate(vote);
    return matrix;
}

} // namespace votekit
