#include "robnbc/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdint>
#include <exception>
#include <fstream>
#include <functional>
#include <limits>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "robnbc/errors.hpp"
#include "robnbc/rng.hpp"
#include "robnbc/robustness.hpp"
#include "robnbc/text.hpp"

namespace robnbc {

namespace {

// Role tags for seed derivation; see derive_seed in rng.hpp.
enum SeedRole : std::uint64_t {
    kSeedRand = 1,
    kSeedTestSet = 2,
    kSeedShift = 3,
    kSeedTrainSet = 4,
    kSeedCv = 5,
    kSeedBootstrap = 6,
};

std::uint64_t gamma_bits(double gamma) { return std::bit_cast<std::uint64_t>(gamma); }

double metric_value(const ReportRow& row, int metric) {
    switch (metric) {
        case 0: return row.u_m;
        case 1: return row.u_H;
        case 2: return row.u_a;
        case 3: return row.u_t;
        case 4: return row.u_e_standard;
        case 5: return row.eps_glob;
        case 6: return row.eps_loc;
        default: throw std::invalid_argument("metric index out of range");
    }
}

} // namespace

int metric_index(const std::string& name) {
    for (int i = 0; i < kNumMetrics; ++i)
        if (name == kMetricNames[static_cast<std::size_t>(i)]) return i;
    throw std::invalid_argument("unknown metric name '" + name + "'");
}

std::size_t ReliabilityReport::correct_count() const {
    std::size_t n = 0;
    for (const ReportRow& row : rows)
        if (row.correct) ++n;
    return n;
}

ReliabilityReport score_instances(const NbcModel& model, const Ensemble* ensemble,
                                  const std::vector<LabeledInstance>& instances,
                                  double bisection_tol) {
    ReliabilityReport report;
    report.alpha_selected = model.alpha;
    report.rows.reserve(instances.size());
    for (std::size_t k = 0; k < instances.size(); ++k) {
        const LabeledInstance& inst = instances[k];
        ReportRow row;
        row.instance_index = static_cast<int>(k);
        row.true_class = inst.class_index;
        const Prediction pred = predict(model, inst.feature_values);
        row.predicted_class = pred.predicted_class;
        row.correct = inst.class_index >= 0 && pred.predicted_class == inst.class_index;

        bool zero_marginal = false;
        try {
            row.u_m = max_prob_uncertainty(model, inst.feature_values);
            row.u_H = entropy_uncertainty(model, inst.feature_values);
        } catch (const std::invalid_argument&) {
            zero_marginal = true;  // only reachable at alpha = 0
        }
        if (zero_marginal) {
            row.u_m = row.u_H = std::numeric_limits<double>::quiet_NaN();
        }
        if (ensemble != nullptr && !zero_marginal) {
            row.u_a = aleatoric_uncertainty(*ensemble, inst.feature_values);
            row.u_t = total_uncertainty(*ensemble, inst.feature_values);
            row.u_e_literal = row.u_a - row.u_t;
            row.u_e_standard = row.u_t - row.u_a;
        } else {
            row.u_a = row.u_t = std::numeric_limits<double>::quiet_NaN();
            row.u_e_literal = row.u_e_standard = std::numeric_limits<double>::quiet_NaN();
        }
        if (zero_marginal) {
            row.eps_glob = row.eps_loc = 0.0;
        } else {
            row.eps_glob = global_robustness(model, inst.feature_values).epsilon;
            row.eps_loc = local_robustness(model, inst.feature_values, bisection_tol).epsilon;
        }
        report.rows.push_back(row);
    }
    return report;
}

ReliabilityReport run_single(const Dataset& train, const Dataset& test, const SingleConfig& config) {
    if (train.domain != test.domain)
        throw std::invalid_argument("run_single: train and test domains differ");
    const AlphaSelection sel = select_alpha(train, config.alpha_grid, config.folds, config.cv_seed);
    const NbcModel model = fit(train, sel.alpha);
    const Ensemble ensemble =
        fit_ensemble(train, sel.alpha, config.ensemble_size, config.bootstrap_seed);

    ReliabilityReport report =
        score_instances(model, &ensemble, test.instances, config.bisection_tol);
    report.alpha_selected = sel.alpha;
    report.n_train = static_cast<int>(train.size());
    report.cv_seed = config.cv_seed;
    report.bootstrap_seed = config.bootstrap_seed;
    return report;
}

AccuracyAcceptanceCurve accuracy_acceptance(const ReliabilityReport& report,
                                            const std::string& metric_name) {
    const int metric = metric_index(metric_name);
    const bool ascending = metric < kFirstRobustnessMetric;
    if (report.rows.empty())
        throw std::invalid_argument("accuracy_acceptance: empty report");

    struct Entry { double key; int index; bool correct; };
    std::vector<Entry> entries;
    entries.reserve(report.rows.size());
    for (const ReportRow& row : report.rows) {
        if (row.true_class < 0)
            throw std::invalid_argument("accuracy_acceptance: report contains unlabeled instances");
        const double key = metric_value(row, metric);
        if (std::isnan(key))
            throw std::invalid_argument("accuracy_acceptance: metric '" + metric_name + "' is absent");
        entries.push_back({key, row.instance_index, row.correct});
    }
    std::sort(entries.begin(), entries.end(), [ascending](const Entry& a, const Entry& b) {
        if (a.key != b.key) return ascending ? a.key < b.key : a.key > b.key;
        return a.index < b.index;
    });

    AccuracyAcceptanceCurve curve;
    curve.metric_name = metric_name;
    curve.accuracy.resize(entries.size());
    std::size_t correct = 0;
    for (std::size_t k = 0; k < entries.size(); ++k) {
        if (entries[k].correct) ++correct;
        curve.accuracy[k] = static_cast<double>(correct) / static_cast<double>(k + 1);
    }
    return curve;
}

const CellStats& GridStats::cell(int n_train, double gamma) const {
    for (const CellStats& c : cells)
        if (c.n_train == n_train && c.gamma == gamma) return c;
    throw std::invalid_argument("no cell with n_train=" + std::to_string(n_train) +
                                ", gamma=" + format_double(gamma));
}

namespace {

std::array<std::vector<double>, kNumMetrics> replicate_curves(const ReliabilityReport& report) {
    std::array<std::vector<double>, kNumMetrics> curves;
    for (int m = 0; m < kNumMetrics; ++m)
        curves[static_cast<std::size_t>(m)] =
            accuracy_acceptance(report, kMetricNames[static_cast<std::size_t>(m)]).accuracy;
    return curves;
}

} // namespace

GridStats run_grid(const GridConfig& config) {
    if (config.n_test < 1 || config.n_shift < 1 || config.n_train_sets < 1)
        throw std::invalid_argument("run_grid: counts must be positive");
    GeneratorConfig gen = config.generator;
    gen.seed = derive_seed(config.master_seed, {kSeedRand});
    const JointMassFunction test_dist = make_test(gen);
    const Dataset test_set = sample_dataset(test_dist, static_cast<std::size_t>(config.n_test),
                                            derive_seed(config.master_seed, {kSeedTestSet}));

    GridStats stats;
    stats.n_test = config.n_test;
    const int replicates = config.n_shift * config.n_train_sets;
    const int workers = std::max(1, config.workers);

    for (int n_train : config.n_train_values) {
        for (double gamma : config.gamma_values) {
            const std::uint64_t nt = static_cast<std::uint64_t>(n_train);
            const std::uint64_t gb = gamma_bits(gamma);

            // All replicate curves for this cell, indexed by replicate so the
            // aggregation order never depends on scheduling.
            std::vector<std::array<std::vector<double>, kNumMetrics>> curves(
                static_cast<std::size_t>(replicates));
            std::atomic<int> next{0};
            std::exception_ptr failure;
            std::mutex failure_mutex;
            auto worker = [&]() {
                try {
                while (true) {
                    const int rep = next.fetch_add(1);
                    if (rep >= replicates) return;
                    const std::uint64_t shift_idx = static_cast<std::uint64_t>(rep / config.n_train_sets);
                    const std::uint64_t train_idx = static_cast<std::uint64_t>(rep % config.n_train_sets);
                    const TrainDistribution train_dist = make_train(
                        test_dist, gamma,
                        derive_seed(config.master_seed, {kSeedShift, nt, gb, shift_idx}));
                    const Dataset train_set = sample_dataset(
                        train_dist.joint, static_cast<std::size_t>(n_train),
                        derive_seed(config.master_seed, {kSeedTrainSet, nt, gb, shift_idx, train_idx}));
                    SingleConfig single = config.single;
                    single.cv_seed =
                        derive_seed(config.master_seed, {kSeedCv, nt, gb, shift_idx, train_idx});
                    single.bootstrap_seed =
                        derive_seed(config.master_seed, {kSeedBootstrap, nt, gb, shift_idx, train_idx});
                    ReliabilityReport report = run_single(train_set, test_set, single);
                    report.gamma = gamma;
                    report.shift_tv = train_dist.shift_tv;
                    curves[static_cast<std::size_t>(rep)] = replicate_curves(report);
                }
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            };
            if (workers == 1) {
                worker();
            } else {
                std::vector<std::thread> pool;
                pool.reserve(static_cast<std::size_t>(workers));
                for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
                for (std::thread& t : pool) t.join();
            }
            if (failure) std::rethrow_exception(failure);

            CellStats cell;
            cell.n_train = n_train;
            cell.gamma = gamma;
            const std::size_t len = static_cast<std::size_t>(config.n_test);
            for (int m = 0; m < kNumMetrics; ++m) {
                auto& mean = cell.mean[static_cast<std::size_t>(m)];
                auto& stddev = cell.stddev[static_cast<std::size_t>(m)];
                mean.assign(len, 0.0);
                stddev.assign(len, 0.0);
                for (const auto& rep : curves)
                    for (std::size_t k = 0; k < len; ++k) mean[k] += rep[static_cast<std::size_t>(m)][k];
                for (double& v : mean) v /= replicates;
                for (const auto& rep : curves)
                    for (std::size_t k = 0; k < len; ++k) {
                        const double d = rep[static_cast<std::size_t>(m)][k] - mean[k];
                        stddev[k] += d * d;
                    }
                // Population standard deviation: the replicates are the whole
                // designed population of the cell.
                for (double& v : stddev) v = std::sqrt(v / replicates);
            }
            stats.cells.push_back(std::move(cell));
        }
    }
    return stats;
}

void write_curves_csv(const GridStats& stats, std::ostream& out) {
    out << "n_train,gamma,metric,acceptance_rate,mean_accuracy,std_accuracy\n";
    for (const CellStats& cell : stats.cells) {
        for (int m = 0; m < kNumMetrics; ++m) {
            const auto& mean = cell.mean[static_cast<std::size_t>(m)];
            const auto& stddev = cell.stddev[static_cast<std::size_t>(m)];
            for (std::size_t k = 0; k < mean.size(); ++k) {
                const double rate = static_cast<double>(k + 1) / static_cast<double>(stats.n_test);
                out << cell.n_train << ',' << format_double(cell.gamma) << ','
                    << kMetricNames[static_cast<std::size_t>(m)] << ',' << format_double(rate) << ','
                    << format_double(mean[k]) << ',' << format_double(stddev[k]) << '\n';
            }
        }
    }
}

void write_curves_csv(const GridStats& stats, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open for writing", path);
    write_curves_csv(stats, out);
    if (!out) throw io_error("write failed", path);
}

GridStats read_curves_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line))
        throw parse_error("empty curves CSV", 1);
    if (strip(line) != "n_train,gamma,metric,acceptance_rate,mean_accuracy,std_accuracy")
        throw parse_error("unexpected curves CSV header", 1);

    GridStats stats;
    long line_no = 1;
    std::size_t cell_idx = SIZE_MAX;
    while (std::getline(in, line)) {
        ++line_no;
        auto s = strip(line);
        if (s.empty()) continue;
        auto cells = split(s, ',');
        if (cells.size() != 6) throw parse_error("expected 6 columns", line_no);
        const int n_train = static_cast<int>(parse_long(cells[0], line_no));
        const double gamma = parse_double(cells[1], line_no);
        const int metric = metric_index(std::string(cells[2]));
        if (cell_idx == SIZE_MAX || stats.cells[cell_idx].n_train != n_train ||
            stats.cells[cell_idx].gamma != gamma) {
            cell_idx = SIZE_MAX;
            for (std::size_t i = 0; i < stats.cells.size(); ++i)
                if (stats.cells[i].n_train == n_train && stats.cells[i].gamma == gamma) cell_idx = i;
            if (cell_idx == SIZE_MAX) {
                stats.cells.push_back(CellStats{n_train, gamma, {}, {}});
                cell_idx = stats.cells.size() - 1;
            }
        }
        stats.cells[cell_idx].mean[static_cast<std::size_t>(metric)].push_back(parse_double(cells[4], line_no));
        stats.cells[cell_idx].stddev[static_cast<std::size_t>(metric)].push_back(parse_double(cells[5], line_no));
    }
    if (!stats.cells.empty())
        stats.n_test = static_cast<int>(stats.cells.front().mean.front().size());
    return stats;
}

GridStats read_curves_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open", path);
    return read_curves_csv(in);
}

namespace {

std::string field_or_blank(double v) {
    return std::isnan(v) ? std::string() : format_double(v);
}

} // namespace

void write_report_csv(const ReliabilityReport& report, std::ostream& out, bool with_metadata) {
    if (with_metadata) {
        out << "# alpha_selected " << format_double(report.alpha_selected) << '\n';
        out << "# n_train " << report.n_train << '\n';
        out << "# gamma " << format_double(report.gamma) << '\n';
        out << "# shift_tv " << format_double(report.shift_tv) << '\n';
        out << "# cv_seed " << report.cv_seed << '\n';
        out << "# bootstrap_seed " << report.bootstrap_seed << '\n';
    }
    out << "instance_index,true_class,predicted_class,correct,"
           "u_m,u_H,u_a,u_t,u_e_literal,u_e_standard,eps_glob,eps_loc\n";
    for (const ReportRow& row : report.rows) {
        out << row.instance_index << ',';
        if (row.true_class >= 0)
            out << row.true_class << ',' << row.predicted_class << ',' << (row.correct ? 1 : 0);
        else
            out << ',' << row.predicted_class << ',';
        out << ',' << field_or_blank(row.u_m) << ',' << field_or_blank(row.u_H) << ','
            << field_or_blank(row.u_a) << ',' << field_or_blank(row.u_t) << ','
            << field_or_blank(row.u_e_literal) << ',' << field_or_blank(row.u_e_standard) << ','
            << format_double(row.eps_glob) << ',' << format_double(row.eps_loc) << '\n';
    }
}

void write_report_csv(const ReliabilityReport& report, const std::string& path, bool with_metadata) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open for writing", path);
    write_report_csv(report, out, with_metadata);
    if (!out) throw io_error("write failed", path);
}

ReliabilityReport read_report_csv(std::istream& in) {
    ReliabilityReport report;
    std::string line;
    long line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        auto s = strip(line);
        if (s.empty()) continue;
        if (s.front() == '#') {
            auto cells = split(s, ' ');
            if (cells.size() == 3) {
                if (cells[1] == "alpha_selected") report.alpha_selected = parse_double(cells[2], line_no);
                else if (cells[1] == "n_train") report.n_train = static_cast<int>(parse_long(cells[2], line_no));
                else if (cells[1] == "gamma") report.gamma = parse_double(cells[2], line_no);
                else if (cells[1] == "shift_tv") report.shift_tv = parse_double(cells[2], line_no);
                else if (cells[1] == "cv_seed") report.cv_seed = static_cast<std::uint64_t>(parse_long(cells[2], line_no));
                else if (cells[1] == "bootstrap_seed") report.bootstrap_seed = static_cast<std::uint64_t>(parse_long(cells[2], line_no));
            }
            continue;
        }
        if (!header_seen) {
            if (s != "instance_index,true_class,predicted_class,correct,"
                     "u_m,u_H,u_a,u_t,u_e_literal,u_e_standard,eps_glob,eps_loc")
                throw parse_error("unexpected report CSV header", line_no);
            header_seen = true;
            continue;
        }
        auto cells = split(s, ',');
        if (cells.size() != 12) throw parse_error("expected 12 columns", line_no);
        ReportRow row;
        row.instance_index = static_cast<int>(parse_long(cells[0], line_no));
        row.true_class = cells[1].empty() ? -1 : static_cast<int>(parse_long(cells[1], line_no));
        row.predicted_class = static_cast<int>(parse_long(cells[2], line_no));
        row.correct = !cells[3].empty() && parse_long(cells[3], line_no) != 0;
        auto opt = [&](std::string_view cell) {
            return cell.empty() ? std::numeric_limits<double>::quiet_NaN() : parse_double(cell, line_no);
        };
        row.u_m = opt(cells[4]);
        row.u_H = opt(cells[5]);
        row.u_a = opt(cells[6]);
        row.u_t = opt(cells[7]);
        row.u_e_literal = opt(cells[8]);
        row.u_e_standard = opt(cells[9]);
        row.eps_glob = parse_double(cells[10], line_no);
        row.eps_loc = parse_double(cells[11], line_no);
        report.rows.push_back(row);
    }
    if (!header_seen) throw parse_error("missing report CSV header");
    return report;
}

ReliabilityReport read_report_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open", path);
    return read_report_csv(in);
}

// ---------------------------------------------------------------------------
// SVG rendering
// ---------------------------------------------------------------------------

namespace {

constexpr std::array<const char*, kNumMetrics> kMetricColors = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#000000", "#8c564b"};

std::string svg_num(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 6);
    return std::string(buf, res.ptr);
}

} // namespace

void write_grid_svg(const GridStats& stats, const std::string& path, CurveKind kind) {
    if (stats.cells.empty()) {
        std::ofstream out(path);
        if (!out) throw io_error("cannot open for writing", path);
        out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
            << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"200\" height=\"40\">"
            << "<text x=\"10\" y=\"25\">no cells</text></svg>\n";
        return;
    }

    // Panel layout: training-set size decreasing top to bottom, shift
    // increasing left to right.
    std::vector<int> n_train_values;
    std::vector<double> gamma_values;
    for (const CellStats& cell : stats.cells) {
        if (std::find(n_train_values.begin(), n_train_values.end(), cell.n_train) == n_train_values.end())
            n_train_values.push_back(cell.n_train);
        if (std::find(gamma_values.begin(), gamma_values.end(), cell.gamma) == gamma_values.end())
            gamma_values.push_back(cell.gamma);
    }
    std::sort(n_train_values.begin(), n_train_values.end(), std::greater<>());
    std::sort(gamma_values.begin(), gamma_values.end());

    const double y_min = kind == CurveKind::mean ? 0.4 : 0.0;
    const double y_max = kind == CurveKind::mean ? 1.0 : 0.25;
    const double panel_w = 300, panel_h = 220, gap_x = 60, gap_y = 50;
    const double margin_left = 70, margin_top = 70, margin_right = 30, margin_bottom = 50;
    const std::size_t n_rows = n_train_values.size(), n_cols = gamma_values.size();
    const double width = margin_left + n_cols * panel_w + (n_cols - 1) * gap_x + margin_right;
    const double height = margin_top + n_rows * panel_h + (n_rows - 1) * gap_y + margin_bottom;

    std::ofstream out(path);
    if (!out) throw io_error("cannot open for writing", path);
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << svg_num(width) << "\" height=\""
        << svg_num(height) << "\" viewBox=\"0 0 " << svg_num(width) << ' ' << svg_num(height) << "\">\n";
    out << "<style>text{font-family:sans-serif;font-size:12px;}</style>\n";
    out << "<text x=\"" << svg_num(margin_left) << "\" y=\"20\" font-size=\"15\">"
        << (kind == CurveKind::mean ? "Mean accuracy-acceptance curves"
                                    : "Standard deviation of accuracy-acceptance curves")
        << "</text>\n";

    // Legend.
    double lx = margin_left;
    for (int m = 0; m < kNumMetrics; ++m) {
        out << "<line x1=\"" << svg_num(lx) << "\" y1=\"36\" x2=\"" << svg_num(lx + 22)
            << "\" y2=\"36\" stroke=\"" << kMetricColors[static_cast<std::size_t>(m)]
            << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << svg_num(lx + 26) << "\" y=\"40\">"
            << kMetricNames[static_cast<std::size_t>(m)] << "</text>\n";
        lx += 110;
    }

    int panel_id = 0;
    for (std::size_t r = 0; r < n_rows; ++r) {
        for (std::size_t col = 0; col < n_cols; ++col) {
            const CellStats* cell = nullptr;
            for (const CellStats& c : stats.cells)
                if (c.n_train == n_train_values[r] && c.gamma == gamma_values[col]) cell = &c;
            if (cell == nullptr) continue;

            const double ox = margin_left + col * (panel_w + gap_x);
            const double oy = margin_top + r * (panel_h + gap_y);
            auto map_x = [&](double rate) { return ox + rate * panel_w; };
            auto map_y = [&](double v) { return oy + panel_h - (v - y_min) / (y_max - y_min) * panel_h; };

            out << "<g>\n";
            out << "<clipPath id=\"clip" << panel_id << "\"><rect x=\"" << svg_num(ox) << "\" y=\""
                << svg_num(oy) << "\" width=\"" << svg_num(panel_w) << "\" height=\""
                << svg_num(panel_h) << "\"/></clipPath>\n";
            out << "<rect x=\"" << svg_num(ox) << "\" y=\"" << svg_num(oy) << "\" width=\""
                << svg_num(panel_w) << "\" height=\"" << svg_num(panel_h)
                << "\" fill=\"none\" stroke=\"#444444\"/>\n";
            out << "<text x=\"" << svg_num(ox) << "\" y=\"" << svg_num(oy - 8) << "\">N_train="
                << cell->n_train << ", gamma=" << format_double(cell->gamma) << "</text>\n";

            for (int tick = 0; tick <= 5; ++tick) {
                const double rate = tick / 5.0;
                out << "<line x1=\"" << svg_num(map_x(rate)) << "\" y1=\"" << svg_num(oy + panel_h)
                    << "\" x2=\"" << svg_num(map_x(rate)) << "\" y2=\"" << svg_num(oy + panel_h + 5)
                    << "\" stroke=\"#444444\"/>\n";
                out << "<text x=\"" << svg_num(map_x(rate) - 8) << "\" y=\""
                    << svg_num(oy + panel_h + 18) << "\">" << svg_num(rate) << "</text>\n";
                const double v = y_min + (y_max - y_min) * tick / 5.0;
                out << "<line x1=\"" << svg_num(ox - 5) << "\" y1=\"" << svg_num(map_y(v))
                    << "\" x2=\"" << svg_num(ox) << "\" y2=\"" << svg_num(map_y(v))
                    << "\" stroke=\"#444444\"/>\n";
                out << "<text x=\"" << svg_num(ox - 38) << "\" y=\"" << svg_num(map_y(v) + 4) << "\">"
                    << svg_num(v) << "</text>\n";
            }

            const std::size_t len = cell->mean.front().size();
            const std::size_t step = std::max<std::size_t>(1, len / 200);
            for (int m = 0; m < kNumMetrics; ++m) {
                const auto& curve = kind == CurveKind::mean ? cell->mean[static_cast<std::size_t>(m)]
                                                            : cell->stddev[static_cast<std::size_t>(m)];
                out << "<polyline fill=\"none\" stroke=\""
                    << kMetricColors[static_cast<std::size_t>(m)]
                    << "\" stroke-width=\"1.5\" clip-path=\"url(#clip" << panel_id << ")\" points=\"";
                bool first = true;
                for (std::size_t k = 0; k < len; k += step) {
                    const double rate = static_cast<double>(k + 1) / static_cast<double>(len);
                    if (!first) out << ' ';
                    out << svg_num(map_x(rate)) << ',' << svg_num(map_y(curve[k]));
                    first = false;
                }
                if ((len - 1) % step != 0)
                    out << ' ' << svg_num(map_x(1.0)) << ',' << svg_num(map_y(curve[len - 1]));
                out << "\"/>\n";
            }
            out << "</g>\n";
            ++panel_id;
        }
    }
    out << "</svg>\n";
    if (!out) throw io_error("write failed", path);
}

} // namespace robnbc
