// robnbc: reliability metrics for Naive Bayes classifiers on categorical
// data. Subcommands: synth (distribution generation), fit (train a model),
// score (per-instance reliability report), experiment (accuracy-acceptance
// grid), report (curves from an existing report).

#include <bit>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "robnbc/errors.hpp"
#include "robnbc/experiment.hpp"
#include "robnbc/rng.hpp"
#include "robnbc/robustness.hpp"
#include "robnbc/text.hpp"

namespace fs = std::filesystem;
using namespace robnbc;

namespace {

// Exit codes: 0 success, 1 CLI usage, 2 invalid argument/domain error,
// 3 input parse error, 4 I/O error, 5 internal error.
constexpr int kExitUsage = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitParse = 3;
constexpr int kExitIo = 4;
constexpr int kExitInternal = 5;

std::string shortest(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::vector<double> parse_double_list(const std::string& s, const char* what) {
    std::vector<double> out;
    for (auto cell : split(s, ','))
        out.push_back(parse_double(strip(cell)));
    if (out.empty()) throw std::invalid_argument(std::string("empty list for ") + what);
    return out;
}

std::vector<int> parse_int_list(const std::string& s, const char* what) {
    std::vector<int> out;
    for (auto cell : split(s, ','))
        out.push_back(static_cast<int>(parse_long(strip(cell))));
    if (out.empty()) throw std::invalid_argument(std::string("empty list for ") + what);
    return out;
}

struct GeneratorFlags {
    int classes = 3;
    std::string cards = "2,3,3,4";
    std::string class_probs = "0.4,0.35,0.25";
    double beta = 0.3;
    double peak = 0.85;
};

void add_generator_flags(CLI::App* cmd, GeneratorFlags& flags) {
    cmd->add_option("--classes", flags.classes, "Number of classes");
    cmd->add_option("--cards", flags.cards, "Comma-separated feature cardinalities");
    cmd->add_option("--class-probs", flags.class_probs, "Comma-separated class probabilities");
    cmd->add_option("--beta", flags.beta, "Mixture weight of the random part of P_test");
    cmd->add_option("--peak", flags.peak, "Peak feature probability of P_fix");
}

GeneratorConfig generator_from_flags(const GeneratorFlags& flags) {
    GeneratorConfig gen;
    gen.domain = DomainSpec(flags.classes, parse_int_list(flags.cards, "--cards"));
    gen.class_probs = parse_double_list(flags.class_probs, "--class-probs");
    gen.beta = flags.beta;
    gen.peak = flags.peak;
    return gen;
}

// Instance CSV for scoring: either the dataset schema (class,f1,...,fN) or
// features only (f1,...,fN); the class column is optional.
std::vector<LabeledInstance> read_instances(const DomainSpec& domain, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open", path);
    std::string line;
    if (!std::getline(in, line)) throw parse_error("empty instances file", 1);
    auto header = split(strip(line), ',');
    bool labeled;
    if (!header.empty() && header.front() == "class" &&
        header.size() == static_cast<std::size_t>(domain.num_features()) + 1) {
        labeled = true;
    } else if (!header.empty() && header.front() == "f1" &&
               header.size() == static_cast<std::size_t>(domain.num_features())) {
        labeled = false;
    } else {
        throw parse_error("expected header class,f1,...,fN or f1,...,fN matching the model domain", 1);
    }

    std::vector<LabeledInstance> out;
    long line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        auto s = strip(line);
        if (s.empty()) continue;
        auto cells = split(s, ',');
        if (cells.size() != header.size())
            throw parse_error("wrong number of columns", line_no);
        LabeledInstance inst;
        std::size_t first_feature = 0;
        if (labeled) {
            inst.class_index = static_cast<int>(parse_long(strip(cells[0]), line_no));
            if (inst.class_index < 0 || inst.class_index >= domain.num_classes)
                throw parse_error("class index out of range", line_no);
            first_feature = 1;
        } else {
            inst.class_index = -1;
        }
        for (std::size_t i = first_feature; i < cells.size(); ++i)
            inst.feature_values.push_back(static_cast<int>(parse_long(strip(cells[i]), line_no)));
        try {
            domain.check_feature_vector(inst.feature_values);
        } catch (const std::invalid_argument& e) {
            throw parse_error(e.what(), line_no);
        }
        out.push_back(std::move(inst));
    }
    return out;
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw io_error("cannot create directory", dir);
}

int run(int argc, char** argv) {
    CLI::App app{"Robustness and uncertainty quantification for Naive Bayes classifiers"};
    app.require_subcommand(1);
    app.fallthrough();  // inherited: lets --config follow the subcommand name
    app.set_config("--config", "", "Read options from a key-value config file ([subcommand] sections)");

    // --- synth -------------------------------------------------------------
    auto* synth = app.add_subcommand("synth", "Generate the synthetic test/train distributions");
    GeneratorFlags synth_gen;
    add_generator_flags(synth, synth_gen);
    std::uint64_t synth_seed = 0;
    std::string synth_out;
    std::string synth_gamma = "0,0.2,0.4";
    int synth_n_shift = 10;
    synth->add_option("--seed", synth_seed, "Master seed");
    synth->add_option("--out", synth_out, "Output directory")->required();
    synth->add_option("--gamma", synth_gamma, "Comma-separated shift mixture weights");
    synth->add_option("--n-shift", synth_n_shift, "Shift distributions per gamma");

    // --- fit ---------------------------------------------------------------
    auto* fit_cmd = app.add_subcommand("fit", "Fit an NBC model from a dataset CSV");
    std::string fit_data, fit_out, fit_grid;
    int fit_classes = 0;
    std::string fit_cards;
    std::optional<double> fit_alpha;
    bool fit_cv = false;
    int fit_folds = 5;
    std::uint64_t fit_seed = 0;
    fit_cmd->add_option("--data", fit_data, "Training dataset CSV (class,f1,...,fN)")->required();
    fit_cmd->add_option("--classes", fit_classes, "Number of classes")->required();
    fit_cmd->add_option("--cards", fit_cards, "Comma-separated feature cardinalities")->required();
    fit_cmd->add_option("--alpha", fit_alpha, "Fixed smoothing parameter");
    fit_cmd->add_flag("--cv", fit_cv, "Select alpha by cross-validation");
    fit_cmd->add_option("--grid", fit_grid, "Comma-separated alpha grid for --cv");
    fit_cmd->add_option("--folds", fit_folds, "Cross-validation folds");
    fit_cmd->add_option("--seed", fit_seed, "Shuffle seed for --cv");
    fit_cmd->add_option("--out", fit_out, "Output model file")->required();

    // --- score -------------------------------------------------------------
    auto* score = app.add_subcommand("score", "Score instances against a fitted model");
    std::string score_model, score_instances_path, score_out, score_train;
    double score_tol = 1e-9;
    int score_m = 10;
    std::uint64_t score_seed = 0;
    score->add_option("--model", score_model, "Model file from 'fit'")->required();
    score->add_option("--instances", score_instances_path, "Instance CSV (class optional)")->required();
    score->add_option("--out", score_out, "Output report CSV")->required();
    score->add_option("--tol", score_tol, "Bisection tolerance for the local metric");
    score->add_option("--train", score_train,
                      "Training dataset CSV; enables the bootstrap-ensemble metrics");
    score->add_option("--m", score_m, "Ensemble size for --train");
    score->add_option("--seed", score_seed, "Bootstrap seed for --train");

    // --- experiment ----------------------------------------------------------
    auto* exp = app.add_subcommand("experiment", "Run the accuracy-acceptance grid");
    GeneratorFlags exp_gen;
    add_generator_flags(exp, exp_gen);
    std::uint64_t exp_seed = 0;
    std::string exp_out, exp_replicates;
    std::string exp_n_train = "25,50,100";
    std::string exp_gamma = "0,0.2,0.4";
    std::vector<std::string> exp_cells;
    int exp_n_test = 1000, exp_workers = 1, exp_folds = 5, exp_m = 10;
    double exp_tol = 1e-9;
    std::string exp_alpha_grid;
    exp->add_option("--seed", exp_seed, "Master seed (required for reproducibility)")->required();
    exp->add_option("--out", exp_out, "Output directory")->required();
    exp->add_option("--n-train", exp_n_train, "Comma-separated training-set sizes");
    exp->add_option("--gamma", exp_gamma, "Comma-separated shift mixture weights");
    exp->add_option("--cell", exp_cells, "Restrict to cell 'n_train,gamma' (repeatable)");
    exp->add_option("--n-test", exp_n_test, "Test-set size");
    exp->add_option("--replicates", exp_replicates,
                    "Shift distributions per cell, training sets per shift (e.g. 10,10)");
    exp->add_option("--workers", exp_workers, "Worker threads (never changes the outputs)");
    exp->add_option("--alpha-grid", exp_alpha_grid, "Comma-separated alpha grid");
    exp->add_option("--folds", exp_folds, "Cross-validation folds");
    exp->add_option("--m", exp_m, "Bootstrap ensemble size");
    exp->add_option("--tol", exp_tol, "Bisection tolerance for the local metric");

    // --- report ---------------------------------------------------------------
    auto* rep = app.add_subcommand("report", "Accuracy-acceptance curves from a report CSV");
    std::string rep_in, rep_out, rep_svg;
    std::uint64_t rep_seed = 0;
    rep->add_option("--report", rep_in, "Report CSV from 'score' or 'experiment'")->required();
    rep->add_option("--out", rep_out, "Output curves CSV")->required();
    rep->add_option("--svg", rep_svg, "Optional SVG panel");
    rep->add_option("--seed", rep_seed, "Unused; accepted for interface uniformity");

    CLI11_PARSE(app, argc, argv);

    if (synth->parsed()) {
        GeneratorConfig gen = generator_from_flags(synth_gen);
        gen.seed = derive_seed(synth_seed, {1});
        ensure_dir(synth_out);
        const JointMassFunction fixed = make_fixed(gen);
        const JointMassFunction random = make_random(gen.domain, gen.seed);
        const JointMassFunction test = make_test(gen);
        write_joint_csv(fixed, synth_out + "/P_fix.csv");
        write_joint_csv(random, synth_out + "/P_rand.csv");
        write_joint_csv(test, synth_out + "/P_test.csv");
        for (double gamma : parse_double_list(synth_gamma, "--gamma")) {
            for (int k = 0; k < synth_n_shift; ++k) {
                const TrainDistribution train = make_train(
                    test, gamma,
                    derive_seed(synth_seed, {3, std::bit_cast<std::uint64_t>(gamma),
                                             static_cast<std::uint64_t>(k)}));
                write_joint_csv(train.joint, synth_out + "/P_train_gamma" + shortest(gamma) +
                                                 "_shift" + std::to_string(k) + ".csv");
            }
        }
        return 0;
    }

    if (fit_cmd->parsed()) {
        const DomainSpec domain(fit_classes, parse_int_list(fit_cards, "--cards"));
        const Dataset data = read_dataset_csv(domain, fit_data);
        double alpha;
        if (fit_cv) {
            const std::vector<double> grid =
                fit_grid.empty() ? default_alpha_grid() : parse_double_list(fit_grid, "--grid");
            const AlphaSelection sel = select_alpha(data, grid, fit_folds, fit_seed);
            alpha = sel.alpha;
            std::cout << "selected alpha " << shortest(alpha) << '\n';
            for (std::size_t g = 0; g < grid.size(); ++g)
                std::cout << "cv alpha=" << shortest(grid[g])
                          << " accuracy=" << shortest(sel.cv_accuracy[g]) << '\n';
        } else if (fit_alpha.has_value()) {
            alpha = *fit_alpha;
        } else {
            throw std::invalid_argument("fit: pass --alpha or --cv");
        }
        write_model(robnbc::fit(data, alpha), fit_out);
        return 0;
    }

    if (score->parsed()) {
        const NbcModel model = read_model(score_model);
        const std::vector<LabeledInstance> instances = read_instances(model.domain, score_instances_path);
        std::optional<Ensemble> ensemble;
        if (!score_train.empty()) {
            const Dataset train = read_dataset_csv(model.domain, score_train);
            ensemble = fit_ensemble(train, model.alpha, score_m, score_seed);
        }
        const ReliabilityReport report =
            score_instances(model, ensemble ? &*ensemble : nullptr, instances, score_tol);
        write_report_csv(report, score_out, /*with_metadata=*/false);
        return 0;
    }

    if (exp->parsed()) {
        GridConfig config;
        config.generator = generator_from_flags(exp_gen);
        config.master_seed = exp_seed;
        config.n_test = exp_n_test;
        config.workers = exp_workers;
        config.single.folds = exp_folds;
        config.single.ensemble_size = exp_m;
        config.single.bisection_tol = exp_tol;
        if (!exp_alpha_grid.empty())
            config.single.alpha_grid = parse_double_list(exp_alpha_grid, "--alpha-grid");
        if (!exp_replicates.empty()) {
            const std::vector<int> reps = parse_int_list(exp_replicates, "--replicates");
            if (reps.size() != 2)
                throw std::invalid_argument("--replicates expects 'n_shift,n_train_sets'");
            config.n_shift = reps[0];
            config.n_train_sets = reps[1];
        }

        std::vector<std::pair<int, double>> cell_list;
        if (exp_cells.empty()) {
            config.n_train_values = parse_int_list(exp_n_train, "--n-train");
            config.gamma_values = parse_double_list(exp_gamma, "--gamma");
        } else {
            for (const std::string& spec : exp_cells) {
                auto parts = split(spec, ',');
                if (parts.size() != 2)
                    throw std::invalid_argument("--cell expects 'n_train,gamma'");
                cell_list.emplace_back(static_cast<int>(parse_long(strip(parts[0]))),
                                       parse_double(strip(parts[1])));
            }
        }

        ensure_dir(exp_out);
        GridStats stats;
        if (cell_list.empty()) {
            stats = run_grid(config);
        } else {
            // Per-cell runs reproduce the corresponding cells of the full
            // grid exactly; seeds depend only on the master seed and the
            // cell coordinates.
            for (const auto& [n_train, gamma] : cell_list) {
                GridConfig one = config;
                one.n_train_values = {n_train};
                one.gamma_values = {gamma};
                GridStats part = run_grid(one);
                stats.n_test = part.n_test;
                stats.cells.push_back(std::move(part.cells.front()));
            }
        }
        write_curves_csv(stats, exp_out + "/curves.csv");
        write_grid_svg(stats, exp_out + "/curves_mean.svg", CurveKind::mean);
        write_grid_svg(stats, exp_out + "/curves_std.svg", CurveKind::stddev);
        return 0;
    }

    if (rep->parsed()) {
        const ReliabilityReport report = read_report_csv(rep_in);
        GridStats stats;
        stats.n_test = static_cast<int>(report.rows.size());
        CellStats cell;
        cell.n_train = report.n_train;
        cell.gamma = report.gamma;
        for (int m = 0; m < kNumMetrics; ++m) {
            cell.mean[static_cast<std::size_t>(m)] =
                accuracy_acceptance(report, kMetricNames[static_cast<std::size_t>(m)]).accuracy;
            cell.stddev[static_cast<std::size_t>(m)].assign(report.rows.size(), 0.0);
        }
        stats.cells.push_back(std::move(cell));
        write_curves_csv(stats, rep_out);
        if (!rep_svg.empty()) write_grid_svg(stats, rep_svg, CurveKind::mean);
        return 0;
    }

    return kExitUsage;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const parse_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitParse;
    } catch (const io_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInternal;
    }
}
