#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "robnbc/synthetic.hpp"
#include "robnbc/uncertainty.hpp"

namespace robnbc {

// Fixed metric order used by reports, CSV exports and plots.
inline constexpr int kNumMetrics = 7;
inline constexpr std::array<const char*, kNumMetrics> kMetricNames = {
    "u_m", "u_H", "u_a", "u_t", "u_e", "eps_glob", "eps_loc"};
inline constexpr int kFirstRobustnessMetric = 5;  // eps_glob, eps_loc order descending

int metric_index(const std::string& name);

struct ReportRow {
    int instance_index = 0;
    int true_class = -1;  // -1 when unknown
    int predicted_class = 0;
    bool correct = false;
    double u_m = 0.0, u_H = 0.0, u_a = 0.0, u_t = 0.0;
    double u_e_literal = 0.0, u_e_standard = 0.0;
    double eps_glob = 0.0, eps_loc = 0.0;
};

// Per-instance predictions and all seven metric values, plus run metadata.
struct ReliabilityReport {
    std::vector<ReportRow> rows;
    double alpha_selected = 0.0;
    int n_train = 0;
    double gamma = 0.0;
    double shift_tv = 0.0;
    std::uint64_t cv_seed = 0;
    std::uint64_t bootstrap_seed = 0;

    std::size_t correct_count() const;
};

struct SingleConfig {
    std::vector<double> alpha_grid = default_alpha_grid();
    int folds = 5;
    int ensemble_size = 10;
    double bisection_tol = 1e-9;
    std::uint64_t cv_seed = 0;
    std::uint64_t bootstrap_seed = 0;
};

// The single-experiment pipeline: cross-validated alpha, final fit on the
// whole training set, bootstrap ensemble with the same alpha, then all seven
// metrics for every test instance.
ReliabilityReport run_single(const Dataset& train, const Dataset& test, const SingleConfig& config);

// Scores instances against an already-fit model (and optionally an
// ensemble). Without an ensemble the ensemble metrics are marked absent
// (NaN). Instances may carry true_class = -1.
ReliabilityReport score_instances(const NbcModel& model, const Ensemble* ensemble,
                                  const std::vector<LabeledInstance>& instances,
                                  double bisection_tol = 1e-9);

struct AccuracyAcceptanceCurve {
    std::string metric_name;
    // accuracy[k] is the accuracy on the first k+1 instances of the metric's
    // ordering; the acceptance rate is (k+1)/size.
    std::vector<double> accuracy;
};

// Orders instances by the metric (ascending for uncertainty, descending for
// robustness, u_e by its standard sign, ties by instance index) and computes
// exact prefix accuracies.
AccuracyAcceptanceCurve accuracy_acceptance(const ReliabilityReport& report,
                                            const std::string& metric_name);

struct GridConfig {
    GeneratorConfig generator;
    std::vector<int> n_train_values{25, 50, 100};
    std::vector<double> gamma_values{0.0, 0.2, 0.4};
    int n_test = 1000;
    int n_shift = 10;       // shift distributions per cell
    int n_train_sets = 10;  // training sets per shift distribution
    SingleConfig single;
    std::uint64_t master_seed = 0;
    int workers = 1;
};

struct CellStats {
    int n_train = 0;
    double gamma = 0.0;
    // [metric][prefix]: pointwise mean and population standard deviation of
    // the replicate curves.
    std::array<std::vector<double>, kNumMetrics> mean;
    std::array<std::vector<double>, kNumMetrics> stddev;
};

struct GridStats {
    std::vector<CellStats> cells;
    int n_test = 0;

    const CellStats& cell(int n_train, double gamma) const;
};

// The full grid: one fixed P_test / D_test, then per cell n_shift shift
// distributions x n_train_sets training sets. All seeds are derived from the
// master seed and the cell coordinates, so any subset of cells reproduces
// identically and worker count never changes an output byte.
GridStats run_grid(const GridConfig& config);

// CSV schema: n_train,gamma,metric,acceptance_rate,mean_accuracy,std_accuracy
void write_curves_csv(const GridStats& stats, std::ostream& out);
void write_curves_csv(const GridStats& stats, const std::string& path);
GridStats read_curves_csv(std::istream& in);
GridStats read_curves_csv(const std::string& path);

// One row per instance; metadata as leading '#' lines when requested.
void write_report_csv(const ReliabilityReport& report, std::ostream& out, bool with_metadata = true);
void write_report_csv(const ReliabilityReport& report, const std::string& path, bool with_metadata = true);
ReliabilityReport read_report_csv(std::istream& in);
ReliabilityReport read_report_csv(const std::string& path);

// Panel-per-cell SVG (n_train decreasing top to bottom, gamma increasing
// left to right), one polyline per metric.
enum class CurveKind { mean, stddev };
void write_grid_svg(const GridStats& stats, const std::string& path, CurveKind kind);

} // namespace robnbc
