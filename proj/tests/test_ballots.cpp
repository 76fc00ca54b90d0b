#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "test_support.hpp"
#include "votekit/ballots.hpp"
#include "votekit/gadgets.hpp"

using namespace votekit;
using namespace testing_support;

TEST_CASE("parse_election transcribes a minimal document") {
    const Election e = parse_election("protocol: borda\n"
                                      "candidates: a b p\n"
                                      "fixed: 5 : b > p > a\n"
                                      "coalition: 2\n");
    CHECK(e.protocol == Protocol::Borda);
    const Profile& profile = e.instance.profile;
    REQUIRE(profile.num_candidates() == 3);
    CHECK(profile.label_of(0) == "a");
    CHECK(profile.label_of(2) == "p");
    REQUIRE(profile.fixed_votes.size() == 1);
    CHECK(profile.fixed_votes[0].weight == 5);
    CHECK(profile.fixed_votes[0].order == ord(profile, "b p a"));
    CHECK(e.instance.coalition_weights == std::vector<long long>{2});
    CHECK(!e.instance.target);
}

TEST_CASE("parse_election rejects malformed input") {
    CHECK_THROWS_AS(parse_election("protocol: borda\ncandidates: a b\n"
                                   "fixed: 1 : a > a > b\n"),
                    InputError); // not a permutation
    CHECK_THROWS_AS(parse_election("protocol: borda\ncandidates: a b\n"
                                   "fixed: -3 : a > b\n"),
                    InputError); // negative weight
    CHECK_THROWS_AS(parse_election("protocol: borda\ncandidates: a a\n"), InputError);
    CHECK_THROWS_AS(parse_election("protocol: dictatorship\ncandidates: a b\n"), InputError);
    CHECK_THROWS_AS(parse_election("protocol: borda\ncandidates: a b\n"
                                   "fixed: 1 : a > b\nfixed: 1 : a\n"),
                    InputError); // omission
    CHECK_THROWS_AS(parse_election("protocol: borda\ncandidates: a b\n"
                                   "fixed: 9223372036854775807 : a > b\n"
                                   "coalition: 9223372036854775807\n"),
                    InputError); // weight sum overflows
    CHECK_THROWS_AS(parse_election("protocol: borda\ncandidates: a b\n"
                                   "fixed: 1/2 : a > b\n"),
                    InputError); // rational weights rejected
}

TEST_CASE("schedule lines are cup-only and required for cup") {
    CHECK_THROWS_AS(parse_election("protocol: cup\ncandidates: a b\n"), InputError);
    CHECK_THROWS_AS(parse_election("protocol: stv\ncandidates: a b\n"
                                   "schedule: (a b)\n"),
                    InputError);
    const Election e = parse_election("protocol: cup\ncandidates: a b c p\n"
                                      "schedule: ((a b) (c p))\n");
    REQUIRE(e.schedule);
    CHECK(e.schedule->leaf_count() == 4);
    CHECK_THROWS_AS(parse_election("protocol: cup\ncandidates: a b c p\n"
                                   "schedule: (a (b (c p)))\n"),
                    InputError); // unbalanced
    CHECK_THROWS_AS(parse_election("protocol: cup\ncandidates: a b c p\n"
                                   "schedule: ((a b) (c c))\n"),
                    InputError);
}

TEST_CASE("comments and labels") {
    const Election e = parse_election("# header\nprotocol: stv # trailing\n"
                                      "candidates: x1 y2\n");
    CHECK(e.protocol == Protocol::Stv);
    CHECK(e.instance.profile.num_candidates() == 2);
    CHECK_THROWS_AS(parse_election("protocol: stv\ncandidates: toolonglabel\n"), InputError);
}

TEST_CASE("serialize round-trips the Borda gadget at K=1") {
    const Election gadget = build_gadget(GadgetFamily::BordaCcwm, {{1, 1}});
    const Election back = parse_election(serialize_election(gadget));
    CHECK(back == gadget);
}

TEST_CASE("serialize keeps empty coalitions and weight-0 votes") {
    Election e;
    e.protocol = Protocol::Maximin;
    e.instance.profile = make_profile({"a", "b"});
    e.instance.profile.fixed_votes.push_back(vote(e.instance.profile, "a b", 0));
    const std::string text = serialize_election(e);
    CHECK(text.find("coalition") == std::string::npos);
    CHECK(parse_election(text) == e);
}

TEST_CASE("round-trip identity on random instances") {
    std::mt19937_64 rng(20240719);
    for (int trial = 0; trial < 200; ++trial) {
        Election e;
        e.protocol = static_cast<Protocol>(draw_uniform(rng, 0, 5));
        const int m = static_cast<int>(draw_uniform(rng, 1, 5));
        e.instance.profile = random_profile(rng, m, 4, 9, 0);
        if (e.protocol == Protocol::Cup)
            e.schedule = canonical_schedule(m);
        const int coalition = static_cast<int>(draw_uniform(rng, 0, 3));
        for (int i = 0; i < coalition; ++i)
            e.instance.coalition_weights.push_back(
                static_cast<long long>(draw_uniform(rng, 0, 9)));
        if (draw_uniform(rng, 0, 1)) {
            e.instance.target = ManipulationTarget{
                draw_uniform(rng, 0, 1) ? Mode::Constructive : Mode::Destructive,
                static_cast<int>(draw_uniform(rng, 0, m - 1))};
        }
        CAPTURE(trial);
        CHECK(parse_election(serialize_election(e)) == e);
    }
}

TEST_CASE("pairwise_matrix counts weighted preferences") {
    Profile profile = make_profile({"a", "b", "c"});
    profile.fixed_votes = {vote(profile, "a b c", 2), vote(profile, "c b a", 1)};
    const PairwiseMatrix matrix = pairwise_matrix(profile);
    CHECK(matrix.at(0, 1) == 2);
    CHECK(matrix.at(1, 0) == 1);
    CHECK(matrix.at(1, 2) == 2);
    CHECK(matrix.at(2, 1) == 1);
    CHECK(matrix.at(0, 0) == 0);
}

TEST_CASE("pairwise_matrix of no votes is zero") {
    const PairwiseMatrix matrix = pairwise_matrix(make_profile({"a", "b"}));
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            CHECK(matrix.at(i, j) == 0);
}

TEST_CASE("a weight-k vote equals k unit copies") {
    Profile weighted = make_profile({"a", "b", "c"});
    weighted.fixed_votes = {vote(weighted, "b a c", 4)};
    Profile split = make_profile({"a", "b", "c"});
    for (int i = 0; i < 4; ++i)
        split.fixed_votes.push_back(vote(split, "b a c", 1));
    CHECK(pairwise_matrix(weighted).cells == pairwise_matrix(split).cells);
}

TEST_CASE("pairwise entries of opposite pairs sum to the total weight") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        const int m = static_cast<int>(draw_uniform(rng, 2, 5));
        const Profile profile = random_profile(rng, m, 6, 9, 0);
        long long total = 0;
        for (const WeightedVote& v : profile.fixed_votes)
            total += v.weight;
        const PairwiseMatrix matrix = pairwise_matrix(profile);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                if (i != j)
                    CHECK(matrix.at(i, j) + matrix.at(j, i) == total);
    }
}

TEST_CASE("anonymity: permuting fixed votes changes nothing") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const int m = static_cast<int>(draw_uniform(rng, 2, 4));
        Profile profile = random_profile(rng, m, 6, 9);
        Profile shuffled = profile;
        for (std::size_t i = shuffled.fixed_votes.size(); i > 1; --i)
            std::swap(shuffled.fixed_votes[i - 1],
                      shuffled.fixed_votes[draw_uniform(rng, 0, i - 1)]);
        CHECK(pairwise_matrix(profile).cells == pairwise_matrix(shuffled).cells);
        CHECK(score_winners(Protocol::Borda, profile).scores ==
              score_winners(Protocol::Borda, shuffled).scores);
        CHECK(stv_winners(profile) == stv_winners(shuffled));
    }
}
