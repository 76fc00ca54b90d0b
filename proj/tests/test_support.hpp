#pragma once

// Test-only brute-force oracles, written straight from the protocol
// definitions and kept independent of the library's evaluator so derived
// expectations do not share a code path with what they check.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <vector>

#include "votekit/ballots.hpp"
#include "votekit/manipulate.hpp"
#include "votekit/protocols.hpp"
#include "votekit/rng.hpp"

namespace testing_support {

using namespace votekit;

inline Profile make_profile(const std::vector<std::string>& labels) {
    Profile profile;
    for (const std::string& label : labels)
        profile.candidates.push_back({static_cast<int>(profile.candidates.size()), label});
    return profile;
}

// "b p a" -> vote order by label.
inline VoteOrder ord(const Profile& profile, const std::string& labels) {
    VoteOrder order;
    std::istringstream in(labels);
    std::string token;
    while (in >> token)
        order.push_back(profile.index_of(token));
    return order;
}

inline WeightedVote vote(const Profile& profile, const std::string& labels, long long weight) {
    return {ord(profile, labels), weight};
}

inline std::vector<WeightedVote> all_votes(const Profile& profile,
                                           const std::vector<WeightedVote>& extra) {
    std::vector<WeightedVote> votes = profile.fixed_votes;
    votes.insert(votes.end(), extra.begin(), extra.end());
    return votes;
}

// --------------------------------------------------------------------------
// Naive winner determination
// --------------------------------------------------------------------------

inline long long naive_support(const std::vector<WeightedVote>& votes, int i, int j) {
    long long support = 0;
    for (const WeightedVote& v : votes)
        for (int c : v.order) {
            if (c == i) {
                support += v.weight;
                break;
            }
            if (c == j)
                break;
        }
    return support;
}

inline ScoreTable naive_borda(const Profile& profile, const std::vector<WeightedVote>& extra) {
    const int m = profile.num_candidates();
    ScoreTable scores(m, 0);
    for (const WeightedVote& v : all_votes(profile, extra))
        for (int pos = 0; pos < m; ++pos)
            scores[v.order[pos]] += v.weight * (m - 1 - pos);
    return scores;
}

inline ScoreTable naive_copeland(const Profile& profile, const std::vector<WeightedVote>& extra) {
    const int m = profile.num_candidates();
    const auto votes = all_votes(profile, extra);
    ScoreTable scores(m, 0);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            if (i == j)
                continue;
            const long long si = naive_support(votes, i, j);
            const long long sj = naive_support(votes, j, i);
            if (si > sj)
                ++scores[i];
            else if (sj > si)
                --scores[i];
        }
    return scores;
}

inline ScoreTable naive_maximin(const Profile& profile, const std::vector<WeightedVote>& extra) {
    const int m = profile.num_candidates();
    const auto votes = all_votes(profile, extra);
    ScoreTable scores(m, 0);
    for (int i = 0; i < m; ++i) {
        long long worst = -1;
        for (int j = 0; j < m; ++j) {
            if (i == j)
                continue;
            const long long s = naive_support(votes, i, j);
            if (worst < 0 || s < worst)
                worst = s;
        }
        scores[i] = worst < 0 ? 0 : worst;
    }
    return scores;
}

inline CandidateSet naive_argmax(const ScoreTable& scores) {
    CandidateSet winners;
    const long long best = *std::max_element(scores.begin(), scores.end());
    for (std::size_t c = 0; c < scores.size(); ++c)
        if (scores[c] == best)
            winners.add(static_cast<int>(c));
    return winners;
}

inline CandidateSet naive_stv(const Profile& profile, const std::vector<WeightedVote>& extra) {
    const auto votes = all_votes(profile, extra);
    const int m = profile.num_candidates();
    std::function<CandidateSet(std::vector<int>)> round = [&](std::vector<int> alive) {
        if (alive.size() == 1)
            return CandidateSet::single(alive[0]);
        std::vector<long long> tally(m, 0);
        for (const WeightedVote& v : votes)
            for (int c : v.order)
                if (std::find(alive.begin(), alive.end(), c) != alive.end()) {
                    tally[c] += v.weight;
                    break;
                }
        long long lowest = tally[alive[0]];
        for (int c : alive)
            lowest = std::min(lowest, tally[c]);
        CandidateSet result;
        for (int drop : alive) {
            if (tally[drop] != lowest)
                continue;
            std::vector<int> next;
            for (int c : alive)
                if (c != drop)
                    next.push_back(c);
            result.bits |= round(next).bits;
        }
        return result;
    };
    std::vector<int> everyone(m);
    std::iota(everyone.begin(), everyone.end(), 0);
    return round(everyone);
}

inline CandidateSet naive_cup(const Profile& profile, const std::vector<WeightedVote>& extra,
                              const CupSchedule& schedule) {
    const auto votes = all_votes(profile, extra);
    std::function<CandidateSet(int)> play = [&](int node) {
        const CupSchedule::Node& n = schedule.nodes[node];
        if (schedule.is_leaf(node))
            return CandidateSet::single(n.candidate);
        CandidateSet result;
        for (int c : play(n.left).to_vector())
            for (int d : play(n.right).to_vector()) {
                const long long cd = naive_support(votes, c, d);
                const long long dc = naive_support(votes, d, c);
                if (cd >= dc)
                    result.add(c);
                if (dc >= cd)
                    result.add(d);
            }
        return result;
    };
    return play(schedule.root);
}

inline CandidateSet naive_winner_set(Protocol protocol, const Profile& profile,
                                     const std::vector<WeightedVote>& extra,
                                     const CupSchedule* schedule = nullptr) {
    switch (protocol) {
    case Protocol::Borda: return naive_argmax(naive_borda(profile, extra));
    case Protocol::Copeland: return naive_argmax(naive_copeland(profile, extra));
    case Protocol::Maximin: return naive_argmax(naive_maximin(profile, extra));
    case Protocol::Stv: return naive_stv(profile, extra);
    case Protocol::Cup: return naive_cup(profile, extra, *schedule);
    default: break;
    }
    return {};
}

// --------------------------------------------------------------------------
// Naive decision procedures
// --------------------------------------------------------------------------

inline bool naive_subset_sum(const std::vector<long long>& items, long long target) {
    const int n = static_cast<int>(items.size());
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        long long sum = 0;
        for (int i = 0; i < n; ++i)
            if ((mask >> i) & 1u)
                sum += items[i];
        if (sum == target)
            return true;
    }
    return false;
}

// Exhaustive coalition manipulation decision over every assignment of every
// coalition voter to every vote order. Exponential; only for tiny inputs.
inline bool naive_manipulation(const ManipulationInstance& instance, Protocol protocol,
                               const CupSchedule* schedule = nullptr) {
    const int m = instance.profile.num_candidates();
    const auto types = all_vote_orders(m);
    std::vector<WeightedVote> coalition;
    std::function<bool(std::size_t)> assign = [&](std::size_t k) {
        if (k == instance.coalition_weights.size()) {
            const CandidateSet winners =
                naive_winner_set(protocol, instance.profile, coalition, schedule);
            return meets_target(winners, *instance.target);
        }
        for (const VoteOrder& order : types) {
            coalition.push_back({order, instance.coalition_weights[k]});
            const bool done = assign(k + 1);
            coalition.pop_back();
            if (done)
                return true;
        }
        return false;
    };
    return assign(0);
}

// --------------------------------------------------------------------------
// Random instance generation (deterministic via votekit::draw_uniform)
// --------------------------------------------------------------------------

inline Profile random_profile(std::mt19937_64& rng, int num_candidates, int max_votes,
                              long long max_weight, long long min_weight = 1) {
    std::vector<std::string> labels;
    for (int c = 0; c < num_candidates; ++c)
        labels.push_back(std::string(1, static_cast<char>('a' + c)));
    Profile profile = make_profile(labels);
    const int votes = static_cast<int>(draw_uniform(rng, 1, max_votes));
    for (int v = 0; v < votes; ++v) {
        VoteOrder order(num_candidates);
        std::iota(order.begin(), order.end(), 0);
        for (int i = num_candidates - 1; i > 0; --i)
            std::swap(order[i], order[draw_uniform(rng, 0, i)]);
        profile.fixed_votes.push_back(
            {order, static_cast<long long>(draw_uniform(rng, min_weight, max_weight))});
    }
    return profile;
}

inline VoteOrder random_order(std::mt19937_64& rng, int num_candidates) {
    VoteOrder order(num_candidates);
    std::iota(order.begin(), order.end(), 0);
    for (int i = num_candidates - 1; i > 0; --i)
        std::swap(order[i], order[draw_uniform(rng, 0, i)]);
    return order;
}

} // namespace testing_support
