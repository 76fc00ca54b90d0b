#include "votekit/protocols.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <unordered_map>

namespace votekit {

std::vector<int> CandidateSet::to_vector() const {
    std::vector<int> out;
    for (int c = 0; c < 32; ++c)
        if (contains(c))
            out.push_back(c);
    return out;
}

std::string format_candidate_set(CandidateSet set, const Profile& profile) {
    std::string out;
    for (int c : set.to_vector()) {
        if (!out.empty())
            out += " ";
        out += profile.label_of(c);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Evaluator
// ---------------------------------------------------------------------------

Evaluator::Evaluator(const Profile& profile, const std::vector<WeightedVote>& extra_votes)
    : m_(profile.num_candidates()), pairwise_(profile.num_candidates()),
      borda_(profile.num_candidates(), 0) {
    if (m_ < 1)
        throw InputError("election needs at least one candidate");
    for (const WeightedVote& vote : profile.fixed_votes) {
        if (!is_permutation_order(vote.order, m_))
            throw InputError("vote is not a permutation of the candidates");
        if (vote.weight < 0)
            throw InputError("negative vote weight");
        add_vote(vote.order, vote.weight);
    }
    for (const WeightedVote& vote : extra_votes) {
        if (!is_permutation_order(vote.order, m_))
            throw InputError("extra vote is not a permutation of the candidates");
        if (vote.weight < 0)
            throw InputError("negative vote weight");
        add_vote(vote.order, vote.weight);
    }
    if (m_ <= 8) {
        base_tally_.assign((std::size_t{1} << m_) * m_, 0);
        for (std::uint32_t alive = 1; alive < (std::uint32_t{1} << m_); ++alive) {
            long long* row = base_tally_.data() + std::size_t{alive} * m_;
            for (const Group& group : groups_)
                for (int c : group.order)
                    if ((alive >> c) & 1u) {
                        row[c] += group.weight;
                        break;
                    }
        }
    }
}

void Evaluator::add_vote(const VoteOrder& order, long long weight) {
    total_weight_ = checked_add(total_weight_, weight);
    for (int hi = 0; hi < m_; ++hi) {
        borda_[order[hi]] = checked_add(borda_[order[hi]],
                                        checked_mul(weight, m_ - 1 - hi));
        for (int lo = hi + 1; lo < m_; ++lo)
            pairwise_.at(order[hi], order[lo]) += weight;
    }
    for (Group& group : groups_)
        if (group.order == order) {
            group.weight += weight;
            return;
        }
    groups_.push_back({order, weight});
}

void Evaluator::push(const VoteOrder& order, long long weight) {
    total_weight_ = checked_add(total_weight_, weight);
    for (int hi = 0; hi < m_; ++hi) {
        borda_[order[hi]] = checked_add(borda_[order[hi]],
                                        checked_mul(weight, m_ - 1 - hi));
        for (int lo = hi + 1; lo < m_; ++lo)
            pairwise_.at(order[hi], order[lo]) += weight;
    }
    for (std::size_t g = 0; g < groups_.size(); ++g)
        if (groups_[g].order == order) {
            groups_[g].weight += weight;
            stack_.push_back({static_cast<int>(g), false, weight});
            return;
        }
    groups_.push_back({order, weight});
    stack_.push_back({static_cast<int>(groups_.size()) - 1, true, weight});
}

void Evaluator::pop() {
    const PushedVote top = stack_.back();
    stack_.pop_back();
    Group& group = groups_[top.group];
    total_weight_ -= top.weight;
    const VoteOrder& order = group.order;
    for (int hi = 0; hi < m_; ++hi) {
        borda_[order[hi]] -= top.weight * (m_ - 1 - hi);
        for (int lo = hi + 1; lo < m_; ++lo)
            pairwise_.at(order[hi], order[lo]) -= top.weight;
    }
    group.weight -= top.weight;
    if (top.created)
        groups_.pop_back(); // LIFO discipline: a created group is the last one
}

ScoreTable Evaluator::copeland_scores() const {
    ScoreTable scores(m_, 0);
    for (int i = 0; i < m_; ++i)
        for (int j = i + 1; j < m_; ++j) {
            const long long ij = pairwise_.at(i, j);
            const long long ji = pairwise_.at(j, i);
            if (ij > ji) {
                ++scores[i];
                --scores[j];
            } else if (ji > ij) {
                ++scores[j];
                --scores[i];
            }
        }
    return scores;
}

ScoreTable Evaluator::maximin_scores() const {
    ScoreTable scores(m_, 0);
    for (int i = 0; i < m_; ++i) {
        long long worst = 0;
        bool first = true;
        for (int j = 0; j < m_; ++j) {
            if (j == i)
                continue;
            const long long support = pairwise_.at(i, j);
            if (first || support < worst) {
                worst = support;
                first = false;
            }
        }
        scores[i] = first ? 0 : worst;
    }
    return scores;
}

void Evaluator::tally_into(std::uint32_t alive, long long* tally) const {
    if (!base_tally_.empty()) {
        const long long* row = base_tally_.data() + std::size_t{alive} * m_;
        for (int c = 0; c < m_; ++c)
            tally[c] = row[c];
        // Construction-time votes are covered by the row; pushed votes land
        // on top, one stack entry each.
        for (const PushedVote& pushed : stack_)
            for (int c : groups_[pushed.group].order)
                if ((alive >> c) & 1u) {
                    tally[c] += pushed.weight;
                    break;
                }
        return;
    }
    for (int c = 0; c < m_; ++c)
        tally[c] = 0;
    for (const Group& group : groups_)
        for (int c : group.order)
            if ((alive >> c) & 1u) {
                tally[c] += group.weight;
                break;
            }
}

ScoreTable Evaluator::plurality_tally(CandidateSet alive) const {
    ScoreTable tally(m_, 0);
    tally_into(alive.bits, tally.data());
    return tally;
}

namespace {

CandidateSet argmax_set(const ScoreTable& scores) {
    CandidateSet winners;
    const Score best = *std::max_element(scores.begin(), scores.end());
    for (std::size_t c = 0; c < scores.size(); ++c)
        if (scores[c] == best)
            winners.add(static_cast<int>(c));
    return winners;
}

} // namespace

CandidateSet Evaluator::score_winners(Protocol protocol) const {
    switch (protocol) {
    case Protocol::Borda: return argmax_set(borda_);
    case Protocol::Copeland: return argmax_set(copeland_scores());
    case Protocol::Maximin: return argmax_set(maximin_scores());
    default:
        throw InputError("score_winners: protocol has no score table");
    }
}

CandidateSet Evaluator::stv_eliminate(std::uint32_t alive, bool* tie_seen) const {
    if ((alive & (alive - 1)) == 0)
        return {alive};
    if (stv_flat_) {
        if (stv_seen_[alive] == stv_generation_)
            return stv_memo_[alive];
    } else if (auto it = stv_spill_.find(alive); it != stv_spill_.end()) {
        return it->second;
    }

    long long tally[32];
    tally_into(alive, tally);
    long long lowest = -1;
    for (std::uint32_t bits = alive; bits; bits &= bits - 1) {
        const long long t = tally[__builtin_ctz(bits)];
        if (lowest < 0 || t < lowest)
            lowest = t;
    }
    // Every candidate at the minimum is an elimination branch.
    CandidateSet result;
    int branches = 0;
    for (std::uint32_t bits = alive; bits; bits &= bits - 1) {
        const int c = __builtin_ctz(bits);
        if (tally[c] != lowest)
            continue;
        ++branches;
        result.bits |= stv_eliminate(alive & ~(std::uint32_t{1} << c), tie_seen).bits;
    }
    if (branches > 1 && tie_seen)
        *tie_seen = true;
    if (stv_flat_) {
        stv_seen_[alive] = stv_generation_;
        stv_memo_[alive] = result;
    } else {
        stv_spill_.emplace(alive, result);
    }
    return result;
}

CandidateSet Evaluator::stv_winners(bool* tie_seen) const {
    if (tie_seen)
        *tie_seen = false;
    // Flat generation-stamped memo up to 2^20 subsets, a map beyond that.
    stv_flat_ = m_ <= 20;
    if (stv_flat_) {
        ++stv_generation_;
        const std::size_t space = std::size_t{1} << m_;
        if (stv_seen_.size() < space) {
            stv_seen_.assign(space, 0);
            stv_memo_.assign(space, CandidateSet{});
        }
    } else {
        stv_spill_.clear();
    }
    return stv_eliminate(CandidateSet::all(m_).bits, tie_seen);
}

CandidateSet Evaluator::cup_play(const CupSchedule& schedule, int node) const {
    const CupSchedule::Node& n = schedule.nodes[node];
    if (schedule.is_leaf(node))
        return CandidateSet::single(n.candidate);
    const CandidateSet left = cup_play(schedule, n.left);
    const CandidateSet right = cup_play(schedule, n.right);
    CandidateSet result;
    for (std::uint32_t lb = left.bits; lb; lb &= lb - 1) {
        const int c = __builtin_ctz(lb);
        for (std::uint32_t rb = right.bits; rb; rb &= rb - 1) {
            const int d = __builtin_ctz(rb);
            const long long cd = pairwise_.at(c, d);
            const long long dc = pairwise_.at(d, c);
            if (cd >= dc)
                result.add(c); // strict win or tie branch
            if (dc >= cd)
                result.add(d);
        }
    }
    return result;
}

CandidateSet Evaluator::cup_winners(const CupSchedule& schedule) const {
    return cup_play(schedule, schedule.root);
}

CandidateSet Evaluator::winners(Protocol protocol, const CupSchedule* schedule) const {
    switch (protocol) {
    case Protocol::Borda:
    case Protocol::Copeland:
    case Protocol::Maximin:
        return score_winners(protocol);
    case Protocol::Stv:
        return stv_winners();
    case Protocol::Cup:
        if (!schedule)
            throw InputError("cup winner determination requires a schedule");
        schedule->validate(m_);
        return cup_winners(*schedule);
    case Protocol::RandomizedCup:
        throw InputError("randomized-cup has a winner distribution, not a winner set");
    }
    throw InputError("unknown protocol");
}

// ---------------------------------------------------------------------------
// Free functions
// ---------------------------------------------------------------------------

ScoredWinners score_winners(Protocol protocol, const Profile& profile,
                            const std::vector<WeightedVote>& extra_votes) {
    Evaluator eval(profile, extra_votes);
    ScoredWinners out;
    switch (protocol) {
    case Protocol::Borda: out.scores = eval.borda_scores(); break;
    case Protocol::Copeland: out.scores = eval.copeland_scores(); break;
    case Protocol::Maximin: out.scores = eval.maximin_scores(); break;
    default:
        throw InputError("score_winners: protocol has no score table");
    }
    out.winners = argmax_set(out.scores);
    return out;
}

CandidateSet stv_winners(const Profile& profile, const std::vector<WeightedVote>& extra_votes,
                         bool* tie_seen) {
    return Evaluator(profile, extra_votes).stv_winners(tie_seen);
}

ScoreTable plurality_tally(const Profile& profile, const std::vector<WeightedVote>& extra_votes,
                           CandidateSet alive) {
    return Evaluator(profile, extra_votes).plurality_tally(alive);
}

CandidateSet cup_winners(const Profile& profile, const std::vector<WeightedVote>& extra_votes,
                         const CupSchedule& schedule) {
    schedule.validate(profile.num_candidates());
    return Evaluator(profile, extra_votes).cup_winners(schedule);
}

CandidateSet winner_set(Protocol protocol, const Profile& profile,
                        const std::vector<WeightedVote>& extra_votes,
                        const CupSchedule* schedule) {
    return Evaluator(profile, extra_votes).winners(protocol, schedule);
}

RandomizedCupDistribution randomized_cup_distribution(const Profile& profile,
                                                      const std::vector<WeightedVote>& extra_votes) {
    const int m = profile.num_candidates();
    if (m < 1)
        throw InputError("election needs at least one candidate");
    if (m > 8)
        throw InputError("randomized-cup distribution is capped at 8 candidates");

    const Evaluator eval(profile, extra_votes);
    const PairwiseMatrix& pairwise = eval.pairwise();
    const CupSchedule shape = canonical_schedule(m); // leaves carry slots 0..m-1

    std::vector<int> assignment(m);
    std::iota(assignment.begin(), assignment.end(), 0);

    std::vector<long long> wins(m, 0);
    long long ambiguous = 0;
    long long factorial = 0;

    std::function<CandidateSet(int)> play = [&](int node) -> CandidateSet {
        const CupSchedule::Node& n = shape.nodes[node];
        if (shape.is_leaf(node))
            return CandidateSet::single(assignment[n.candidate]);
        const CandidateSet left = play(n.left);
        const CandidateSet right = play(n.right);
        CandidateSet result;
        for (int c : left.to_vector())
            for (int d : right.to_vector()) {
                const long long cd = pairwise.at(c, d);
                const long long dc = pairwise.at(d, c);
                if (cd >= dc)
                    result.add(c);
                if (dc >= cd)
                    result.add(d);
            }
        return result;
    };

    do {
        const CandidateSet winners = play(shape.root);
        if (winners.is_singleton())
            ++wins[winners.to_vector().front()];
        else
            ++ambiguous;
        ++factorial;
    } while (std::next_permutation(assignment.begin(), assignment.end()));

    RandomizedCupDistribution out;
    out.probability.reserve(m);
    for (int c = 0; c < m; ++c)
        out.probability.emplace_back(Rational(wins[c], factorial));
    out.ambiguous = Rational(ambiguous, factorial);
    return out;
}

std::vector<VoteOrder> all_vote_orders(int num_candidates) {
    VoteOrder order(num_candidates);
    std::iota(order.begin(), order.end(), 0);
    std::vector<VoteOrder> out;
    do {
        out.push_back(order);
    } while (std::next_permutation(order.begin(), order.end()));
    return out;
}

std::vector<VoteOrder> vote_orders_topped_by(int num_candidates, int first) {
    std::vector<VoteOrder> out;
    VoteOrder rest;
    for (int c = 0; c < num_candidates; ++c)
        if (c != first)
            rest.push_back(c);
    do {
        VoteOrder order;
        order.reserve(num_candidates);
        order.push_back(first);
        order.insert(order.end(), rest.begin(), rest.end());
        out.push_back(std::move(order));
    } while (std::next_permutation(rest.begin(), rest.end()));
    return out;
}

} // namespace votekit
