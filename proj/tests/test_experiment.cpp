#include <doctest.h>

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "robnbc/experiment.hpp"
#include "support.hpp"

using namespace robnbc;
using namespace robnbc::testsupport;

namespace {

// Minimal XML well-formedness check: balanced, properly nested tags.
bool xml_well_formed(const std::string& text) {
    std::vector<std::string> stack;
    std::size_t pos = 0;
    while ((pos = text.find('<', pos)) != std::string::npos) {
        const std::size_t end = text.find('>', pos);
        if (end == std::string::npos) return false;
        std::string tag = text.substr(pos + 1, end - pos - 1);
        pos = end + 1;
        if (tag.empty()) return false;
        if (tag.front() == '?' || tag.front() == '!') continue;
        if (tag.front() == '/') {
            if (stack.empty()) return false;
            if (stack.back() != tag.substr(1)) return false;
            stack.pop_back();
            continue;
        }
        const bool self_closing = tag.back() == '/';
        if (self_closing) tag.pop_back();
        std::string name;
        for (char ch : tag) {
            if (std::isspace(static_cast<unsigned char>(ch))) break;
            name.push_back(ch);
        }
        if (name.empty()) return false;
        if (!self_closing) stack.push_back(name);
    }
    return stack.empty();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

ReliabilityReport hand_report(std::vector<double> metric, std::vector<bool> correct) {
    ReliabilityReport report;
    for (std::size_t k = 0; k < metric.size(); ++k) {
        ReportRow row;
        row.instance_index = static_cast<int>(k);
        row.true_class = 0;
        row.predicted_class = correct[k] ? 0 : 1;
        row.correct = correct[k];
        row.u_m = metric[k];
        row.u_H = row.u_a = row.u_t = 0.0;
        row.u_e_literal = row.u_e_standard = 0.0;
        row.eps_glob = row.eps_loc = 0.0;
        report.rows.push_back(row);
    }
    return report;
}

GridConfig small_grid_config() {
    GridConfig config;
    config.n_train_values = {25, 50};
    config.gamma_values = {0.0, 0.2};
    config.n_test = 60;
    config.n_shift = 2;
    config.n_train_sets = 2;
    config.master_seed = 31415;
    return config;
}

} // namespace

TEST_CASE("run_single on the degenerate one-instance fixture") {
    DomainSpec dom(2, {2});
    Dataset constant;
    constant.domain = dom;
    for (int k = 0; k < 20; ++k) constant.instances.push_back({0, {0}});

    SingleConfig config;
    config.cv_seed = 1;
    config.bootstrap_seed = 2;
    const ReliabilityReport report = run_single(constant, constant, config);

    REQUIRE(report.rows.size() == 20);
    CHECK(report.correct_count() == 20);  // accuracy 1.0
    CHECK(report.alpha_selected == 0.01); // every alpha ties at accuracy 1, smallest wins

    // u_m bound from the smoothing formulas at alpha = 0.01, n = 20
    const double a = 0.01;
    const double p0 = (20 + a) / (20 + 2 * a), pf0 = (20 + a) / (20 + 2 * a);
    const double p1 = a / (20 + 2 * a), pf1 = a / (0 + 2 * a);
    const double expected_um = p1 * pf1 / (p0 * pf0 + p1 * pf1);
    for (const ReportRow& row : report.rows) {
        CHECK(row.u_m == doctest::Approx(expected_um).epsilon(1e-12));
        CHECK(row.u_m < 1e-3);
        CHECK(row.eps_glob > 0.0);
        CHECK(row.eps_loc > 0.0);
    }

    // byte-identical reports for identical seeds
    std::ostringstream a_csv, b_csv;
    write_report_csv(report, a_csv);
    write_report_csv(run_single(constant, constant, config), b_csv);
    CHECK(a_csv.str() == b_csv.str());
}

TEST_CASE("accuracy_acceptance hand fixture") {
    // ordering by u_m gives correctness sequence [1,1,0,1]
    const ReliabilityReport report = hand_report({0.1, 0.2, 0.3, 0.4}, {true, true, false, true});
    const AccuracyAcceptanceCurve curve = accuracy_acceptance(report, "u_m");
    REQUIRE(curve.accuracy.size() == 4);
    CHECK(curve.accuracy[0] == 1.0);
    CHECK(curve.accuracy[1] == 1.0);
    CHECK(curve.accuracy[2] == doctest::Approx(2.0 / 3).epsilon(1e-15));
    CHECK(curve.accuracy[3] == 0.75);
}

TEST_CASE("accuracy_acceptance tie-break and descending robustness order") {
    // constant metric: ordering falls back to instance index
    const ReliabilityReport constant = hand_report({0.5, 0.5, 0.5}, {false, true, true});
    const AccuracyAcceptanceCurve curve = accuracy_acceptance(constant, "u_m");
    CHECK(curve.accuracy[0] == 0.0);
    CHECK(curve.accuracy[1] == 0.5);

    // robustness metrics order descending
    ReliabilityReport rob = hand_report({0.0, 0.0}, {false, true});
    rob.rows[0].eps_glob = 0.1;
    rob.rows[1].eps_glob = 0.4;  // most robust first
    const AccuracyAcceptanceCurve reversed = accuracy_acceptance(rob, "eps_glob");
    CHECK(reversed.accuracy[0] == 1.0);

    // the epistemic ordering uses the sign-corrected value
    ReliabilityReport eps = hand_report({0.0, 0.0}, {false, true});
    eps.rows[0].u_e_standard = 0.5;
    eps.rows[0].u_e_literal = -0.5;
    eps.rows[1].u_e_standard = 0.1;
    eps.rows[1].u_e_literal = -0.1;
    const AccuracyAcceptanceCurve ordered = accuracy_acceptance(eps, "u_e");
    CHECK(ordered.accuracy[0] == 1.0);  // row 1 (least standard-epistemic) first

    CHECK_THROWS_AS(accuracy_acceptance(constant, "nope"), std::invalid_argument);
}

TEST_CASE("all curves agree at full acceptance") {
    DomainSpec dom(3, {2, 3});
    const Dataset train = random_dataset(dom, 40, 1);
    const Dataset test = random_dataset(dom, 50, 2);
    SingleConfig config;
    config.cv_seed = 3;
    config.bootstrap_seed = 4;
    const ReliabilityReport report = run_single(train, test, config);
    const double accuracy =
        static_cast<double>(report.correct_count()) / static_cast<double>(report.rows.size());
    for (const char* metric : kMetricNames)
        CHECK(accuracy_acceptance(report, metric).accuracy.back() == accuracy);
}

TEST_CASE("run_grid: single replicate means equal the curve, std is zero") {
    GridConfig config;
    config.n_train_values = {30};
    config.gamma_values = {0.2};
    config.n_test = 40;
    config.n_shift = 1;
    config.n_train_sets = 1;
    config.master_seed = 7;
    const GridStats stats = run_grid(config);
    REQUIRE(stats.cells.size() == 1);
    const CellStats& cell = stats.cells.front();
    for (int m = 0; m < kNumMetrics; ++m)
        for (double s : cell.stddev[static_cast<std::size_t>(m)]) CHECK(s == 0.0);
    for (int m = 0; m < kNumMetrics; ++m) {
        for (double v : cell.mean[static_cast<std::size_t>(m)]) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
    }
}

TEST_CASE("run_grid: cells rerun in isolation reproduce the full run") {
    const GridConfig config = small_grid_config();
    const GridStats full = run_grid(config);
    REQUIRE(full.cells.size() == 4);

    GridConfig one = config;
    one.n_train_values = {50};
    one.gamma_values = {0.2};
    const GridStats part = run_grid(one);
    REQUIRE(part.cells.size() == 1);

    const CellStats& a = full.cell(50, 0.2);
    const CellStats& b = part.cells.front();
    for (int m = 0; m < kNumMetrics; ++m) {
        CHECK(a.mean[static_cast<std::size_t>(m)] == b.mean[static_cast<std::size_t>(m)]);
        CHECK(a.stddev[static_cast<std::size_t>(m)] == b.stddev[static_cast<std::size_t>(m)]);
    }
}

TEST_CASE("run_grid output is independent of the worker count") {
    GridConfig config = small_grid_config();
    config.workers = 1;
    const GridStats serial = run_grid(config);
    config.workers = 4;
    const GridStats parallel = run_grid(config);

    std::ostringstream a, b;
    write_curves_csv(serial, a);
    write_curves_csv(parallel, b);
    CHECK(a.str() == b.str());

    for (const CellStats& cell : serial.cells)
        for (int m = 0; m < kNumMetrics; ++m) {
            for (double v : cell.mean[static_cast<std::size_t>(m)]) {
                CHECK(v >= 0.0);
                CHECK(v <= 1.0);
            }
            for (double s : cell.stddev[static_cast<std::size_t>(m)]) CHECK(s >= 0.0);
        }
}

TEST_CASE("curves CSV round-trips at 17-digit precision") {
    GridConfig config = small_grid_config();
    config.n_test = 30;
    const GridStats stats = run_grid(config);
    const std::string path = "test_experiment_curves.csv";
    write_curves_csv(stats, path);
    const GridStats back = read_curves_csv(path);
    REQUIRE(back.cells.size() == stats.cells.size());
    CHECK(back.n_test == stats.n_test);
    for (std::size_t i = 0; i < stats.cells.size(); ++i) {
        CHECK(back.cells[i].n_train == stats.cells[i].n_train);
        CHECK(back.cells[i].gamma == stats.cells[i].gamma);
        for (int m = 0; m < kNumMetrics; ++m) {
            CHECK(back.cells[i].mean[static_cast<std::size_t>(m)] ==
                  stats.cells[i].mean[static_cast<std::size_t>(m)]);
            CHECK(back.cells[i].stddev[static_cast<std::size_t>(m)] ==
                  stats.cells[i].stddev[static_cast<std::size_t>(m)]);
        }
    }
    std::remove(path.c_str());
}

TEST_CASE("report CSV round-trips, including blank fields") {
    DomainSpec dom(2, {2});
    const NbcModel model = fit(random_dataset(dom, 30, 5), 0.5);
    std::vector<LabeledInstance> instances = {{0, {0}}, {-1, {1}}};
    // no ensemble: ensemble metrics are blank
    const ReliabilityReport report = score_instances(model, nullptr, instances);
    const std::string path = "test_experiment_report.csv";
    write_report_csv(report, path);
    const ReliabilityReport back = read_report_csv(path);
    REQUIRE(back.rows.size() == 2);
    CHECK(back.rows[0].true_class == 0);
    CHECK(back.rows[1].true_class == -1);
    CHECK(back.rows[0].u_m == report.rows[0].u_m);
    CHECK(std::isnan(back.rows[0].u_a));
    CHECK(back.rows[0].eps_glob == report.rows[0].eps_glob);
    CHECK(back.rows[1].eps_loc == report.rows[1].eps_loc);
    std::remove(path.c_str());
}

TEST_CASE("SVG export is well-formed XML with one clip per panel") {
    GridConfig config = small_grid_config();
    config.n_test = 30;
    const GridStats stats = run_grid(config);
    const std::string path = "test_experiment_grid.svg";
    write_grid_svg(stats, path, CurveKind::mean);
    const std::string svg = read_file(path);
    CHECK(xml_well_formed(svg));
    std::size_t clips = 0, pos = 0;
    while ((pos = svg.find("<clipPath", pos)) != std::string::npos) {
        ++clips;
        pos += 9;
    }
    CHECK(clips == stats.cells.size());

    write_grid_svg(stats, path, CurveKind::stddev);
    CHECK(xml_well_formed(read_file(path)));
    std::remove(path.c_str());
}

TEST_CASE("empty stats produce a header-only curves CSV") {
    GridStats empty;
    std::ostringstream out;
    write_curves_csv(empty, out);
    CHECK(out.str() == "n_train,gamma,metric,acceptance_rate,mean_accuracy,std_accuracy\n");
}
