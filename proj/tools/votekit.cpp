#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "votekit/ballots.hpp"
#include "votekit/gadgets.hpp"
#include "votekit/manipulate.hpp"
#include "votekit/protocols.hpp"
#include "votekit/uncertain.hpp"

namespace {

using namespace votekit;

// Exit statuses: 0 decided yes / computed, 1 decided no, 2 input error,
// 3 resource exhausted.
constexpr int kExitYes = 0;
constexpr int kExitNo = 1;
constexpr int kExitInputError = 2;
constexpr int kExitExhausted = 3;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError("cannot read '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw InputError("cannot write '" + path + "'");
    out << content;
}

std::string format_double(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.6f", value);
    return buffer;
}

// "scores: p=48 a=45 b=45", best first, declaration order on ties.
std::string format_scores(const ScoreTable& scores, const Profile& profile) {
    std::vector<int> order(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i)
        order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return scores[a] > scores[b]; });
    std::string out;
    for (int c : order) {
        if (!out.empty())
            out += " ";
        out += profile.label_of(c) + "=" + std::to_string(scores[c]);
    }
    return out;
}

void print_witness(const ManipulationAnswer& answer, const ManipulationInstance& instance) {
    for (std::size_t i = 0; i < answer.witness.size(); ++i)
        std::cout << "witness: " << format_order(answer.witness[i], instance.profile)
                  << " weight " << instance.coalition_weights[i] << "\n";
}

int decision_exit(Decision decision) {
    switch (decision) {
    case Decision::Yes: return kExitYes;
    case Decision::No: return kExitNo;
    case Decision::ResourceExhausted: return kExitExhausted;
    }
    return kExitInputError;
}

PartitionInstance parse_partition_list(const std::string& text) {
    PartitionInstance partition;
    std::string token;
    std::istringstream in(text);
    while (std::getline(in, token, ',')) {
        token.erase(0, token.find_first_not_of(" \t"));
        token.erase(token.find_last_not_of(" \t") + 1);
        if (token.empty() ||
            !std::all_of(token.begin(), token.end(),
                         [](unsigned char c) { return std::isdigit(c); }))
            throw InputError("bad partition item '" + token + "'");
        partition.items.push_back(std::stoll(token));
    }
    if (partition.items.empty())
        throw InputError("empty partition list");
    return partition;
}

int run_winner(const std::string& election_path) {
    const Election election = parse_election(read_file(election_path));
    const Profile& profile = election.instance.profile;

    switch (election.protocol) {
    case Protocol::Borda:
    case Protocol::Copeland:
    case Protocol::Maximin: {
        const ScoredWinners result = score_winners(election.protocol, profile);
        std::cout << "scores: " << format_scores(result.scores, profile) << "\n";
        std::cout << "winners: " << format_candidate_set(result.winners, profile) << "\n";
        return kExitYes;
    }
    case Protocol::Stv: {
        std::cout << "winners: " << format_candidate_set(stv_winners(profile), profile)
                  << "\n";
        return kExitYes;
    }
    case Protocol::Cup: {
        std::cout << "winners: "
                  << format_candidate_set(cup_winners(profile, {}, *election.schedule),
                                          profile)
                  << "\n";
        return kExitYes;
    }
    case Protocol::RandomizedCup: {
        const RandomizedCupDistribution dist = randomized_cup_distribution(profile);
        std::cout << "distribution:";
        for (int c = 0; c < profile.num_candidates(); ++c)
            std::cout << " " << profile.label_of(c) << "="
                      << rational_to_string(dist.probability[c]);
        std::cout << "\n";
        std::cout << "ambiguous: " << rational_to_string(dist.ambiguous) << "\n";
        return kExitYes;
    }
    }
    return kExitInputError;
}

int run_manipulate(const std::string& election_path, const std::string& solver,
                   unsigned long long budget, const std::string& threshold_text) {
    const Election election = parse_election(read_file(election_path));
    const ManipulationInstance& instance = election.instance;
    if (!instance.target)
        throw InputError("election file has no target line");
    const CupSchedule* schedule = election.schedule ? &*election.schedule : nullptr;
    const bool constructive = instance.target->mode == Mode::Constructive;

    if (election.protocol == Protocol::RandomizedCup) {
        if (!constructive)
            throw InputError("randomized-cup manipulation is constructive only");
        if (threshold_text.empty())
            throw InputError("randomized-cup manipulation needs --threshold");
        const Rational threshold = parse_probability(threshold_text);
        const RandomizedCupManipulationAnswer result =
            solve_uiccwm_randomized_cup(instance, threshold, budget);
        std::cout << "answer: " << decision_name(result.answer.decision) << "\n";
        std::cout << "probability: " << rational_to_string(result.achieved) << "\n";
        std::cout << "threshold: " << rational_to_string(threshold) << "\n";
        if (result.answer.decision == Decision::Yes)
            print_witness(result.answer, instance);
        std::cout << "nodes: " << result.answer.nodes << "\n";
        return decision_exit(result.answer.decision);
    }

    ManipulationAnswer answer;
    if (solver == "enumerate") {
        answer = solve_unweighted_coalition(instance, election.protocol, schedule);
    } else if (solver == "exact") {
        answer = solve_ccwm_exact(instance, election.protocol, schedule, budget);
    } else if (solver == "cup") {
        if (!schedule)
            throw InputError("the cup solver needs a cup election");
        answer = solve_cup_ccwm(instance, *schedule).answer;
    } else if (solver == "monotone") {
        answer = solve_dcwm_monotone(instance, election.protocol);
    } else if (solver == "via-ccwm") {
        answer = solve_dcwm_via_ccwm(instance, election.protocol, schedule, budget);
    } else if (solver == "auto") {
        if (constructive) {
            if (election.protocol == Protocol::Cup)
                answer = solve_cup_ccwm(instance, *schedule).answer;
            else
                answer = solve_ccwm_exact(instance, election.protocol, schedule, budget);
        } else {
            if (election.protocol == Protocol::Borda ||
                election.protocol == Protocol::Copeland ||
                election.protocol == Protocol::Maximin)
                answer = solve_dcwm_monotone(instance, election.protocol);
            else
                answer = solve_dcwm_via_ccwm(instance, election.protocol, schedule, budget);
        }
    } else {
        throw InputError("unknown solver '" + solver + "'");
    }

    std::cout << "answer: " << decision_name(answer.decision) << "\n";
    if (answer.decision == Decision::Yes)
        print_witness(answer, instance);
    std::cout << "nodes: " << answer.nodes << "\n";
    return decision_exit(answer.decision);
}

int run_evaluate(const std::string& distribution_path, long long samples,
                 std::uint64_t seed, bool have_samples) {
    const DistributionFile file = parse_distribution(read_file(distribution_path));

    if (file.manipulator_weight) {
        if (have_samples)
            throw InputError("manipulator instances evaluate exactly; drop --samples");
        UncertainManipulationInstance instance;
        instance.base = file.evaluation;
        instance.manipulator_weight = *file.manipulator_weight;
        const IndividualManipulationAnswer result = solve_uvcimw(instance);
        std::cout << "best-vote: "
                  << format_order(result.best_vote,
                                  file.evaluation.profile_candidates)
                  << "\n";
        std::cout << "probability: " << rational_to_string(result.probability) << "\n";
        std::cout << "threshold: " << rational_to_string(file.evaluation.threshold) << "\n";
        std::cout << "answer: " << (result.exceeds_threshold ? "yes" : "no") << "\n";
        return result.exceeds_threshold ? kExitYes : kExitNo;
    }

    if (have_samples) {
        const MonteCarloEvaluation result =
            evaluate_montecarlo(file.evaluation, samples, seed);
        std::cout << "estimate: " << format_double(result.estimate) << "\n";
        std::cout << "ci95: " << format_double(result.ci_low) << " "
                  << format_double(result.ci_high) << "\n";
        std::cout << "samples: " << result.samples << "\n";
        std::cout << "seed: " << seed << "\n";
        return kExitYes;
    }

    const ExactEvaluation result = evaluate_exact(file.evaluation);
    std::cout << "probability: " << rational_to_string(result.probability) << "\n";
    std::cout << "threshold: " << rational_to_string(file.evaluation.threshold) << "\n";
    std::cout << "answer: " << (result.exceeds_threshold ? "yes" : "no") << "\n";
    return result.exceeds_threshold ? kExitYes : kExitNo;
}

int run_gadget(const std::string& theorem, const std::string& partition_text,
               const std::string& out_path) {
    const GadgetFamily family = parse_gadget_family(theorem);
    const PartitionInstance partition = parse_partition_list(partition_text);
    const Election gadget = build_gadget(family, partition);
    write_file(out_path, serialize_election(gadget));
    std::cout << "theorem: " << gadget_family_name(family) << "\n";
    std::cout << "partition: ";
    for (std::size_t i = 0; i < partition.items.size(); ++i)
        std::cout << (i ? "," : "") << partition.items[i];
    std::cout << "\n";
    std::cout << "written: " << out_path << "\n";
    return kExitYes;
}

int run_lift(const std::string& theorem, const std::string& in_path,
             const std::string& out_path) {
    DistributionFile out;
    if (theorem == "uvcwe") {
        const Election election = parse_election(read_file(in_path));
        out.evaluation = lift_to_uncertain(election);
    } else if (theorem == "uvcimw") {
        const DistributionFile in = parse_distribution(read_file(in_path));
        if (in.manipulator_weight)
            throw InputError("input already has a manipulator");
        const UncertainManipulationInstance lifted = add_null_manipulator(in.evaluation);
        out.evaluation = lifted.base;
        out.manipulator_weight = lifted.manipulator_weight;
    } else if (theorem == "unweight") {
        const DistributionFile in = parse_distribution(read_file(in_path));
        if (in.manipulator_weight)
            throw InputError("unweighting applies to evaluation instances");
        out.evaluation = unweight_with_correlation(in.evaluation);
    } else {
        throw InputError("unknown lift '" + theorem + "' (uvcwe, uvcimw, unweight)");
    }
    write_file(out_path, serialize_distribution(out));
    std::cout << "written: " << out_path << "\n";
    return kExitYes;
}

int run_verify(const std::string& theorem, const VerifyOptions& options,
               const std::string& out_path) {
    const GadgetFamily family = parse_gadget_family(theorem);
    const EquivalenceReport report = verify_theorem(family, options);
    std::cout << "theorem: " << gadget_family_name(family) << "\n";
    std::cout << "trials: " << report.trials.size() << "\n";
    char agreement[16];
    std::snprintf(agreement, sizeof(agreement), "%.3f", report.agreement_rate());
    std::cout << "agreement: " << agreement << "\n";
    std::cout << "exhausted: " << report.exhausted_count() << "\n";
    if (!out_path.empty()) {
        write_file(out_path, report.to_csv());
        std::cout << "csv: " << out_path << "\n";
    }
    return kExitYes;
}

int run_cup_schedule(const std::string& election_path, const std::string& labels_text) {
    std::vector<std::string> labels;
    if (!election_path.empty()) {
        const Election election = parse_election(read_file(election_path));
        for (const Candidate& c : election.instance.profile.candidates)
            labels.push_back(c.label);
    } else {
        std::istringstream in(labels_text);
        std::string token;
        while (in >> token)
            labels.push_back(token);
    }
    if (labels.empty())
        throw InputError("cup-schedule needs --election or --labels");
    const CupSchedule schedule = canonical_schedule(static_cast<int>(labels.size()));
    std::cout << "schedule: " << serialize_cup_schedule(schedule, labels) << "\n";
    return kExitYes;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"votekit: weighted voting protocols, coalition manipulation solvers, "
                 "reduction gadgets, and vote-uncertainty evaluation"};
    app.require_subcommand(1);

    std::string election_path, distribution_path, out_path, labels_text;
    std::string solver = "auto", theorem, partition_text, threshold_text;
    unsigned long long budget = kDefaultNodeBudget;
    long long samples = 0;
    std::uint64_t seed = 0;
    VerifyOptions verify_options;

    CLI::App* winner = app.add_subcommand("winner", "Determine winners of an election file");
    winner->add_option("--election", election_path, "election file")->required();

    CLI::App* manipulate =
        app.add_subcommand("manipulate", "Decide whether the coalition can reach its target");
    manipulate->add_option("--election", election_path, "election file with a target line")
        ->required();
    manipulate->add_option("--solver", solver,
                           "auto|exact|enumerate|cup|monotone|via-ccwm");
    manipulate->add_option("--budget", budget, "search node budget");
    manipulate->add_option("--threshold", threshold_text,
                           "winning-probability threshold (randomized-cup)");

    CLI::App* evaluate =
        app.add_subcommand("evaluate", "Winning probability under vote uncertainty");
    evaluate->add_option("--distribution", distribution_path, "distribution file")->required();
    CLI::Option* samples_opt =
        evaluate->add_option("--samples", samples, "Monte Carlo sample count");
    evaluate->add_option("--seed", seed, "RNG seed (required with --samples)");
    samples_opt->needs(evaluate->get_option("--seed"));

    CLI::App* gadget = app.add_subcommand("gadget", "Build a reduction gadget election");
    gadget->add_option("--theorem", theorem,
                       "borda-ccwm|copeland-ccwm|maximin-ccwm|stv-ccwm|stv-dcwm")
        ->required();
    gadget->add_option("--partition", partition_text, "comma-separated positive integers")
        ->required();
    gadget->add_option("--out", out_path, "output election file")->required();

    CLI::App* lift = app.add_subcommand("lift", "Lift instances into the uncertainty setting");
    lift->add_option("--theorem", theorem, "uvcwe|uvcimw|unweight")->required();
    lift->add_option("--in", election_path, "input election or distribution file")->required();
    lift->add_option("--out", out_path, "output distribution file")->required();

    CLI::App* verify =
        app.add_subcommand("verify", "Check gadget answers against the subset-sum oracle");
    verify->add_option("--theorem", theorem,
                       "borda-ccwm|copeland-ccwm|maximin-ccwm|stv-ccwm|stv-dcwm")
        ->required();
    verify->add_option("--trials", verify_options.trials, "number of sampled partitions");
    verify->add_option("--max-items", verify_options.max_items, "max partition size");
    verify->add_option("--max-value", verify_options.max_value, "max item value");
    verify->add_option("--seed", verify_options.seed, "RNG seed")->required();
    verify->add_option("--budget", verify_options.node_budget, "per-trial node budget");
    verify->add_option("--out", out_path, "write the per-trial CSV here");

    CLI::App* cup_schedule =
        app.add_subcommand("cup-schedule", "Print the canonical balanced tree");
    cup_schedule->add_flag("--show", "print the schedule");
    cup_schedule->add_option("--election", election_path, "take candidates from this file");
    cup_schedule->add_option("--labels", labels_text, "space-separated candidate labels");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0)
            return app.exit(e); // --help
        app.exit(e);
        return kExitInputError;
    }

    try {
        if (winner->parsed())
            return run_winner(election_path);
        if (manipulate->parsed())
            return run_manipulate(election_path, solver, budget, threshold_text);
        if (evaluate->parsed())
            return run_evaluate(distribution_path, samples, seed, samples_opt->count() > 0);
        if (gadget->parsed())
            return run_gadget(theorem, partition_text, out_path);
        if (lift->parsed())
            return run_lift(theorem, election_path, out_path);
        if (verify->parsed())
            return run_verify(theorem, verify_options, out_path);
        if (cup_schedule->parsed())
            return run_cup_schedule(election_path, labels_text);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitInputError;
}
