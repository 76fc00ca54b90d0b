#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "test_support.hpp"
#include "votekit/gadgets.hpp"
#include "votekit/uncertain.hpp"

using namespace votekit;
using namespace testing_support;

namespace {

long long items_sum(const std::vector<long long>& items) {
    long long sum = 0;
    for (long long item : items)
        sum += item;
    return sum;
}

bool has_fixed_vote(const Election& e, const std::string& labels, long long weight) {
    const WeightedVote wanted = vote(e.instance.profile, labels, weight);
    for (const WeightedVote& v : e.instance.profile.fixed_votes)
        if (v == wanted)
            return true;
    return false;
}

} // namespace

// ---------------------------------------------------------------------------
// Subset-sum oracle
// ---------------------------------------------------------------------------

TEST_CASE("partition oracle on the worked examples") {
    const PartitionAnswer two = partition_oracle({{1, 1}});
    REQUIRE(two.yes);
    CHECK(two.witness.size() == 1);

    CHECK(!partition_oracle({{1, 1, 4}}).yes);

    const PartitionAnswer trio = partition_oracle({{3, 1, 2}});
    REQUIRE(trio.yes);
    const std::vector<long long> items{3, 1, 2};
    long long sum = 0;
    for (int idx : trio.witness)
        sum += items[idx];
    CHECK(sum == 3);
}

TEST_CASE("odd totals are answered no and bad items rejected") {
    CHECK(!partition_oracle({{1, 1, 1}}).yes);
    CHECK_THROWS_AS(partition_oracle({{0, 2}}), InputError);
    CHECK_THROWS_AS(partition_oracle({{-2, 2}}), InputError);
    CHECK_THROWS_AS(partition_oracle({{1'000'001}}), InputError);
}

TEST_CASE("oracle agrees with subset enumeration and always returns valid witnesses") {
    std::mt19937_64 rng(1001);
    for (int trial = 0; trial < 300; ++trial) {
        PartitionInstance partition;
        const int n = static_cast<int>(draw_uniform(rng, 1, 12));
        for (int i = 0; i < n; ++i)
            partition.items.push_back(static_cast<long long>(draw_uniform(rng, 1, 12)));
        const PartitionAnswer answer = partition_oracle(partition);
        const long long total = items_sum(partition.items);
        const bool expected =
            total % 2 == 0 && naive_subset_sum(partition.items, total / 2);
        CAPTURE(trial);
        CHECK(answer.yes == expected);
        if (answer.yes) {
            long long sum = 0;
            std::vector<bool> used(partition.items.size(), false);
            for (int idx : answer.witness) {
                CHECK(!used[idx]);
                used[idx] = true;
                sum += partition.items[idx];
            }
            CHECK(sum == total / 2);
        }
    }
}

// ---------------------------------------------------------------------------
// Gadget construction
// ---------------------------------------------------------------------------

TEST_CASE("borda gadget multiplicities at K=1") {
    const Election e = build_gadget(GadgetFamily::BordaCcwm, {{1, 1}});
    CHECK(e.protocol == Protocol::Borda);
    CHECK(e.instance.profile.num_candidates() == 3);
    CHECK(has_fixed_vote(e, "a b p", 5));
    CHECK(has_fixed_vote(e, "b a p", 5));
    CHECK(e.instance.coalition_weights == std::vector<long long>{6, 6});
    REQUIRE(e.instance.target);
    CHECK(e.instance.target->mode == Mode::Constructive);
    CHECK(e.instance.target->candidate == e.instance.profile.index_of("p"));
}

TEST_CASE("copeland gadget multiplicities at K=1") {
    const Election e = build_gadget(GadgetFamily::CopelandCcwm, {{1, 1}});
    CHECK(has_fixed_vote(e, "p a b c", 4));
    CHECK(has_fixed_vote(e, "c p b a", 4));
    CHECK(has_fixed_vote(e, "a b c p", 2));
    CHECK(has_fixed_vote(e, "b a c p", 2));
    CHECK(e.instance.coalition_weights == std::vector<long long>{1, 1});
}

TEST_CASE("maximin gadget multiplicities at K=1") {
    const Election e = build_gadget(GadgetFamily::MaximinCcwm, {{1, 1}});
    CHECK(has_fixed_vote(e, "a b c p", 6));
    CHECK(has_fixed_vote(e, "b c a p", 6));
    CHECK(has_fixed_vote(e, "c a b p", 3));
    CHECK(has_fixed_vote(e, "p c a b", 5));
    CHECK(e.instance.coalition_weights == std::vector<long long>{2, 2});
}

TEST_CASE("stv gadget multiplicities at K=1") {
    const Election e = build_gadget(GadgetFamily::StvCcwm, {{1, 1}});
    CHECK(has_fixed_vote(e, "b p a", 5));
    CHECK(has_fixed_vote(e, "a b p", 4));
    CHECK(has_fixed_vote(e, "p a b", 4));
    CHECK(e.instance.coalition_weights == std::vector<long long>{2, 2});
}

TEST_CASE("gadget builders reject odd totals") {
    CHECK_THROWS_AS(build_gadget(GadgetFamily::BordaCcwm, {{1, 1, 1}}), InputError);
}

TEST_CASE("score identities hold symbolically for random K") {
    std::mt19937_64 rng(2002);
    for (int trial = 0; trial < 20; ++trial) {
        const long long k = static_cast<long long>(draw_uniform(rng, 1, 12));
        const PartitionInstance partition{{k, k}};

        // Borda: a = b = 18K-3 before the coalition, p = 24K and a = b = 24K-3
        // after the witness halves vote (p,a,b) and (p,b,a).
        const Election borda = build_gadget(GadgetFamily::BordaCcwm, partition);
        const Profile& bp = borda.instance.profile;
        const ScoredWinners base = score_winners(Protocol::Borda, bp);
        CHECK(base.scores[bp.index_of("a")] == 18 * k - 3);
        CHECK(base.scores[bp.index_of("b")] == 18 * k - 3);
        const std::vector<WeightedVote> borda_witness = {vote(bp, "p a b", 6 * k),
                                                         vote(bp, "p b a", 6 * k)};
        const ScoredWinners manipulated = score_winners(Protocol::Borda, bp, borda_witness);
        CHECK(manipulated.scores[bp.index_of("p")] == 24 * k);
        CHECK(manipulated.scores[bp.index_of("a")] == 24 * k - 3);
        CHECK(manipulated.scores[bp.index_of("b")] == 24 * k - 3);

        // Maximin: p lands on 9K with every opponent at 9K-1.
        const Election maximin = build_gadget(GadgetFamily::MaximinCcwm, partition);
        const Profile& mp = maximin.instance.profile;
        const std::vector<WeightedVote> maximin_witness = {vote(mp, "p a b c", 2 * k),
                                                           vote(mp, "p b c a", 2 * k)};
        const ScoredWinners maximin_scores =
            score_winners(Protocol::Maximin, mp, maximin_witness);
        CHECK(maximin_scores.scores[mp.index_of("p")] == 9 * k);
        CHECK(maximin_scores.scores[mp.index_of("a")] == 9 * k - 1);
        CHECK(maximin_scores.scores[mp.index_of("b")] == 9 * k - 1);
        CHECK(maximin_scores.scores[mp.index_of("c")] == 9 * k - 1);

        // STV: first-round tallies (b, a, p) = (6K-1, 6K, 6K).
        const Election stv = build_gadget(GadgetFamily::StvCcwm, partition);
        const Profile& sp = stv.instance.profile;
        const std::vector<WeightedVote> stv_witness = {vote(sp, "a p b", 2 * k),
                                                       vote(sp, "p a b", 2 * k)};
        const ScoreTable round1 = plurality_tally(sp, stv_witness, CandidateSet::all(3));
        CHECK(round1[sp.index_of("b")] == 6 * k - 1);
        CHECK(round1[sp.index_of("a")] == 6 * k);
        CHECK(round1[sp.index_of("p")] == 6 * k);
    }
}

// ---------------------------------------------------------------------------
// The destructive STV wrapper
// ---------------------------------------------------------------------------

TEST_CASE("destructive wrapper around the K=1 stv gadget") {
    const Election source = build_gadget(GadgetFamily::StvCcwm, {{1, 1}});
    const Election wrapped = build_stv_destructive(source);
    const Profile& profile = wrapped.instance.profile;
    CHECK(profile.num_candidates() == 4);
    CHECK(profile.label_of(3) == "h");
    REQUIRE(wrapped.instance.target);
    CHECK(wrapped.instance.target->mode == Mode::Destructive);
    CHECK(wrapped.instance.target->candidate == 3);
    CHECK(wrapped.instance.coalition_weights == source.instance.coalition_weights);

    // W = 5 + 4 + 4 + 2 + 2 = 17, so the h-topped bloc weighs 22.
    CHECK(has_fixed_vote(wrapped, "h a b p", 22));
    // Source votes carry h at the bottom.
    CHECK(has_fixed_vote(wrapped, "b p a h", 5));
    CHECK(has_fixed_vote(wrapped, "a b p h", 4));
    CHECK(has_fixed_vote(wrapped, "p a b h", 4));
    // Six unit votes, two of them (p,h,a,b).
    int units = 0, phab = 0;
    for (const WeightedVote& v : profile.fixed_votes)
        if (v.weight == 1) {
            ++units;
            if (v.order == ord(profile, "p h a b"))
                ++phab;
        }
    CHECK(units == 6);
    CHECK(phab == 2);
}

TEST_CASE("destructive wrapper answer tracks the partition") {
    const Election yes_case =
        build_stv_destructive(build_gadget(GadgetFamily::StvCcwm, {{1, 1}}));
    const ManipulationAnswer yes_answer =
        solve_dcwm_via_ccwm(yes_case.instance, Protocol::Stv);
    REQUIRE(yes_answer.decision == Decision::Yes);
    const CandidateSet winners = stv_winners(
        yes_case.instance.profile, witness_votes(yes_case.instance, yes_answer.witness));
    CHECK(!winners.contains(yes_case.instance.target->candidate));

    const Election no_case =
        build_stv_destructive(build_gadget(GadgetFamily::StvCcwm, {{1, 1, 4}}));
    CHECK(solve_dcwm_via_ccwm(no_case.instance, Protocol::Stv).decision == Decision::No);
}

TEST_CASE("destructive wrapper rejects non-conforming inputs") {
    CHECK_THROWS_AS(build_stv_destructive(build_gadget(GadgetFamily::CopelandCcwm, {{1, 1}})),
                    InputError);
    Election wrong = build_gadget(GadgetFamily::StvCcwm, {{1, 1}});
    wrong.instance.target.reset();
    CHECK_THROWS_AS(build_stv_destructive(wrong), InputError);
}

// ---------------------------------------------------------------------------
// Uncertainty lifts
// ---------------------------------------------------------------------------

TEST_CASE("lifting the K=1 borda gadget") {
    const Election gadget = build_gadget(GadgetFamily::BordaCcwm, {{1, 1}});
    const UncertainEvaluationInstance lift = lift_to_uncertain(gadget);
    CHECK(lift.threshold == Rational(0));
    CHECK(lift.protocol == Protocol::Borda);
    REQUIRE(lift.distribution.voters.size() == 4); // 2 degenerate blocs + 2 uniform
    int degenerate = 0, uniform = 0;
    long long lifted_weight = 0;
    for (const VoterDistribution& voter : lift.distribution.voters) {
        (voter.uniform ? uniform : degenerate) += 1;
        lifted_weight += voter.weight;
    }
    CHECK(degenerate == 2);
    CHECK(uniform == 2);
    CHECK(lifted_weight == 5 + 5 + 6 + 6); // total voter weight is preserved
}

TEST_CASE("lift requires a constructive target") {
    Election gadget = build_gadget(GadgetFamily::BordaCcwm, {{1, 1}});
    gadget.instance.target.reset();
    CHECK_THROWS_AS(lift_to_uncertain(gadget), InputError);
}

TEST_CASE("adding the null manipulator changes nothing but the shape") {
    const UncertainEvaluationInstance lift =
        lift_to_uncertain(build_gadget(GadgetFamily::BordaCcwm, {{1, 1}}));
    const UncertainManipulationInstance manip = add_null_manipulator(lift);
    CHECK(manip.manipulator_weight == 0);
    CHECK(manip.base == lift);
}

TEST_CASE("unweighting expands weights into perfectly correlated units") {
    UncertainEvaluationInstance inst;
    inst.profile_candidates = make_profile({"a", "b", "p"});
    inst.protocol = Protocol::Borda;
    inst.target = 2;
    inst.threshold = Rational(0);
    inst.distribution.voters = {{3, true, {}},
                                {2, false, ord(inst.profile_candidates, "a b p")},
                                {1, true, {}}};
    const UncertainEvaluationInstance flat = unweight_with_correlation(inst);
    REQUIRE(flat.distribution.voters.size() == 6);
    for (const VoterDistribution& voter : flat.distribution.voters)
        CHECK(voter.weight == 1);
    // Groups: the three clones of voter 0 and the two of voter 1; the lone
    // unit voter stays ungrouped.
    REQUIRE(flat.distribution.correlation_groups.size() == 2);
    CHECK(flat.distribution.correlation_groups[0] == std::vector<int>{0, 1, 2});
    CHECK(flat.distribution.correlation_groups[1] == std::vector<int>{3, 4});
}

TEST_CASE("unweighting unit weights is the identity") {
    UncertainEvaluationInstance inst;
    inst.profile_candidates = make_profile({"a", "b"});
    inst.protocol = Protocol::Copeland;
    inst.target = 0;
    inst.threshold = Rational(1, 2);
    inst.distribution.voters = {{1, true, {}},
                                {1, false, ord(inst.profile_candidates, "a b")}};
    CHECK(unweight_with_correlation(inst) == inst);
}

TEST_CASE("unweighting rejects weight-0 voters") {
    UncertainEvaluationInstance inst;
    inst.profile_candidates = make_profile({"a", "b"});
    inst.protocol = Protocol::Borda;
    inst.target = 0;
    inst.distribution.voters = {{0, true, {}}};
    CHECK_THROWS_AS(unweight_with_correlation(inst), InputError);
}

// ---------------------------------------------------------------------------
// Verification harness
// ---------------------------------------------------------------------------

TEST_CASE("sampled partitions always have even totals within bounds") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 200; ++trial) {
        const PartitionInstance partition = sample_partition(rng, 8, 10);
        CHECK(items_sum(partition.items) % 2 == 0);
        CHECK(!partition.items.empty());
        for (long long item : partition.items) {
            CHECK(item >= 1);
            CHECK(item <= 10);
        }
    }
}

TEST_CASE("verify_theorem agrees across families on small runs") {
    const GadgetFamily families[] = {GadgetFamily::BordaCcwm, GadgetFamily::CopelandCcwm,
                                     GadgetFamily::MaximinCcwm, GadgetFamily::StvCcwm};
    for (const GadgetFamily family : families) {
        VerifyOptions options;
        options.trials = 8;
        options.max_items = 4;
        options.max_value = 6;
        options.seed = 2024;
        const EquivalenceReport report = verify_theorem(family, options);
        CAPTURE(gadget_family_name(family));
        CHECK(report.agreement_rate() == 1.0);
        CHECK(report.exhausted_count() == 0);
    }
}

TEST_CASE("verify_theorem covers the destructive chain") {
    VerifyOptions options;
    options.trials = 5;
    options.max_items = 3;
    options.max_value = 5;
    options.seed = 77;
    const EquivalenceReport report = verify_theorem(GadgetFamily::StvDcwm, options);
    CHECK(report.agreement_rate() == 1.0);
}

TEST_CASE("verify_theorem is deterministic and its trials include both answers") {
    VerifyOptions options;
    options.trials = 12;
    options.max_items = 5;
    options.max_value = 8;
    options.seed = 99;
    const EquivalenceReport a = verify_theorem(GadgetFamily::BordaCcwm, options);
    const EquivalenceReport b = verify_theorem(GadgetFamily::BordaCcwm, options);
    CHECK(a.to_csv() == b.to_csv());
    int yes = 0, no = 0;
    for (const TrialRecord& trial : a.trials)
        (trial.oracle_yes ? yes : no) += 1;
    CHECK(yes > 0);
    CHECK(no > 0);
}

TEST_CASE("csv report shape") {
    VerifyOptions options;
    options.trials = 2;
    options.max_items = 2;
    options.max_value = 4;
    options.seed = 5;
    const std::string csv = verify_theorem(GadgetFamily::BordaCcwm, options).to_csv();
    CHECK(csv.rfind("trial,items,oracle,solver,agree,nodes_expanded\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}
