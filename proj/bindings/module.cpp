#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "robnbc/experiment.hpp"
#include "robnbc/robustness.hpp"

namespace py = pybind11;
using namespace robnbc;

PYBIND11_MODULE(robnbc, m) {
    m.doc() = "Robustness and uncertainty quantification for Naive Bayes classifiers";

    py::class_<DomainSpec>(m, "DomainSpec")
        .def(py::init<int, std::vector<int>>(), py::arg("num_classes"), py::arg("feature_cards"))
        .def_readonly("num_classes", &DomainSpec::num_classes)
        .def_readonly("feature_cards", &DomainSpec::feature_cards)
        .def_property_readonly("joint_size", &DomainSpec::joint_size)
        .def(py::self == py::self);

    py::class_<MassFunction>(m, "MassFunction")
        .def(py::init<std::vector<double>>(), py::arg("probs"))
        .def_property_readonly("probs", &MassFunction::probs)
        .def("__len__", &MassFunction::size)
        .def("__getitem__", [](const MassFunction& m_, std::size_t i) {
            if (i >= m_.size()) throw py::index_error();
            return m_[i];
        });

    py::class_<JointMassFunction>(m, "JointMassFunction")
        .def(py::init<DomainSpec, std::vector<double>, double>(), py::arg("domain"),
             py::arg("probs"), py::arg("tol") = 1e-12)
        .def_property_readonly("domain", &JointMassFunction::domain)
        .def_property_readonly("probs", &JointMassFunction::probs)
        .def("at", [](const JointMassFunction& j, int c, const std::vector<int>& f) {
            return j.at(c, f);
        }, py::arg("c"), py::arg("f"));

    py::class_<LabeledInstance>(m, "LabeledInstance")
        .def(py::init([](int class_index, std::vector<int> features) {
            return LabeledInstance{class_index, std::move(features)};
        }), py::arg("class_index"), py::arg("feature_values"))
        .def_readonly("class_index", &LabeledInstance::class_index)
        .def_readonly("feature_values", &LabeledInstance::feature_values);

    py::class_<Dataset>(m, "Dataset")
        .def(py::init([](DomainSpec domain, std::vector<LabeledInstance> instances) {
            Dataset d{std::move(domain), std::move(instances)};
            d.check();
            return d;
        }), py::arg("domain"), py::arg("instances"))
        .def_readonly("domain", &Dataset::domain)
        .def_readonly("instances", &Dataset::instances)
        .def("__len__", &Dataset::size);

    m.def("normalize", [](const std::vector<double>& w) { return normalize(w); }, py::arg("weights"));
    m.def("mix", py::overload_cast<const MassFunction&, const MassFunction&, double>(&mix),
          py::arg("p"), py::arg("q"), py::arg("w"));
    m.def("mix", py::overload_cast<const JointMassFunction&, const JointMassFunction&, double>(&mix),
          py::arg("p"), py::arg("q"), py::arg("w"));
    m.def("condition_on_features",
          [](const JointMassFunction& j, const std::vector<int>& f) { return condition_on_features(j, f); },
          py::arg("joint"), py::arg("f"));
    m.def("class_marginal", &class_marginal, py::arg("joint"));
    m.def("sample_outcomes",
          [](const MassFunction& d, std::size_t n, std::uint64_t seed) { return sample(d, n, seed); },
          py::arg("dist"), py::arg("n"), py::arg("seed"));
    m.def("sample_dataset",
          [](const JointMassFunction& d, std::size_t n, std::uint64_t seed) { return sample(d, n, seed); },
          py::arg("dist"), py::arg("n"), py::arg("seed"));
    m.def("total_variation", &total_variation, py::arg("p"), py::arg("q"));

    py::class_<NbcModel>(m, "NbcModel")
        .def_readonly("domain", &NbcModel::domain)
        .def_readonly("class_marginal", &NbcModel::class_marginal)
        .def_readonly("alpha", &NbcModel::alpha)
        .def("class_prob", &NbcModel::class_prob, py::arg("c"))
        .def("cond_prob", &NbcModel::cond_prob, py::arg("c"), py::arg("feature"), py::arg("value"));

    py::class_<Prediction>(m, "Prediction")
        .def_readonly("predicted_class", &Prediction::predicted_class)
        .def_readonly("argmax_set", &Prediction::argmax_set)
        .def("tied", &Prediction::tied);

    m.def("fit", &fit, py::arg("dataset"), py::arg("alpha"));
    m.def("joint_prob",
          [](const NbcModel& model, int c, const std::vector<int>& f) { return joint_prob(model, c, f); },
          py::arg("model"), py::arg("c"), py::arg("f"));
    m.def("predict",
          [](const NbcModel& model, const std::vector<int>& f) { return predict(model, f); },
          py::arg("model"), py::arg("f"));
    m.def("posterior",
          [](const NbcModel& model, const std::vector<int>& f) { return posterior(model, f); },
          py::arg("model"), py::arg("f"));
    m.def("select_alpha",
          [](const Dataset& d, const std::vector<double>& grid, int folds, std::uint64_t seed) {
              const AlphaSelection sel = select_alpha(d, grid, folds, seed);
              return py::make_tuple(sel.alpha, sel.cv_accuracy);
          },
          py::arg("dataset"), py::arg("grid"), py::arg("folds"), py::arg("seed"));
    m.def("default_alpha_grid", &default_alpha_grid);
    m.def("to_joint", &to_joint, py::arg("model"));
    m.def("write_model", py::overload_cast<const NbcModel&, const std::string&>(&write_model),
          py::arg("model"), py::arg("path"));
    m.def("read_model", py::overload_cast<const std::string&>(&read_model), py::arg("path"));

    py::class_<Ensemble>(m, "Ensemble")
        .def_readonly("members", &Ensemble::members)
        .def("__len__", &Ensemble::size);

    m.def("fit_ensemble", &fit_ensemble, py::arg("dataset"), py::arg("alpha"), py::arg("m"), py::arg("seed"));
    m.def("max_prob_uncertainty",
          [](const NbcModel& model, const std::vector<int>& f) { return max_prob_uncertainty(model, f); },
          py::arg("model"), py::arg("f"));
    m.def("entropy_uncertainty",
          [](const NbcModel& model, const std::vector<int>& f) { return entropy_uncertainty(model, f); },
          py::arg("model"), py::arg("f"));
    m.def("aleatoric_uncertainty",
          [](const Ensemble& e, const std::vector<int>& f) { return aleatoric_uncertainty(e, f); },
          py::arg("ensemble"), py::arg("f"));
    m.def("total_uncertainty",
          [](const Ensemble& e, const std::vector<int>& f) { return total_uncertainty(e, f); },
          py::arg("ensemble"), py::arg("f"));
    m.def("epistemic_uncertainty",
          [](const Ensemble& e, const std::vector<int>& f) {
              const EpistemicValue v = epistemic_uncertainty(e, f);
              return py::make_tuple(v.literal, v.standard);
          },
          py::arg("ensemble"), py::arg("f"));

    py::enum_<PerturbationKind>(m, "PerturbationKind")
        .value("global_", PerturbationKind::global)
        .value("local", PerturbationKind::local);

    py::class_<RobustnessValue>(m, "RobustnessValue")
        .def_readonly("epsilon", &RobustnessValue::epsilon)
        .def_readonly("converged", &RobustnessValue::converged)
        .def_readonly("bracket_lo", &RobustnessValue::bracket_lo)
        .def_readonly("bracket_hi", &RobustnessValue::bracket_hi);

    m.def("is_robust_finite",
          [](const std::vector<JointMassFunction>& cands, const std::vector<int>& f, int predicted) {
              return is_robust_finite(cands, f, predicted);
          },
          py::arg("candidates"), py::arg("f"), py::arg("predicted"));
    m.def("global_robustness",
          [](const NbcModel& model, const std::vector<int>& f) { return global_robustness(model, f); },
          py::arg("model"), py::arg("f"));
    m.def("global_robustness_joint",
          [](const JointMassFunction& j, const std::vector<int>& f) { return global_robustness(j, f); },
          py::arg("joint"), py::arg("f"));
    m.def("local_phi",
          [](const NbcModel& model, const std::vector<int>& f, int c, double eps) {
              return local_phi(model, f, c, eps);
          },
          py::arg("model"), py::arg("f"), py::arg("c"), py::arg("epsilon"));
    m.def("local_robustness",
          [](const NbcModel& model, const std::vector<int>& f, double tol) {
              return local_robustness(model, f, tol);
          },
          py::arg("model"), py::arg("f"), py::arg("tol") = 1e-9);
    m.def("contamination_vertices_global",
          [](const JointMassFunction& p, double eps) {
              return contamination_vertices_global(p, eps).vertices;
          },
          py::arg("p"), py::arg("epsilon"));
    m.def("contamination_vertices_local",
          [](const NbcModel& model, double eps) {
              return contamination_vertices_local(model, eps).vertices;
          },
          py::arg("model"), py::arg("epsilon"));
    m.def("credal_prediction",
          [](const NbcModel& model, const std::vector<int>& f, double eps, PerturbationKind kind) {
              return credal_prediction(model, f, eps, kind);
          },
          py::arg("model"), py::arg("f"), py::arg("epsilon"), py::arg("kind"));

    py::class_<GeneratorConfig>(m, "GeneratorConfig")
        .def(py::init<>())
        .def_readwrite("domain", &GeneratorConfig::domain)
        .def_readwrite("beta", &GeneratorConfig::beta)
        .def_readwrite("class_probs", &GeneratorConfig::class_probs)
        .def_readwrite("peak", &GeneratorConfig::peak)
        .def_readwrite("seed", &GeneratorConfig::seed);

    m.def("make_fixed", &make_fixed, py::arg("config"));
    m.def("make_random", &make_random, py::arg("domain"), py::arg("seed"));
    m.def("make_test", &make_test, py::arg("config"));
    m.def("make_train",
          [](const JointMassFunction& test, double gamma, std::uint64_t seed) {
              const TrainDistribution t = make_train(test, gamma, seed);
              return py::make_tuple(t.joint, t.shift_tv);
          },
          py::arg("test"), py::arg("gamma"), py::arg("seed"));

    py::class_<ReportRow>(m, "ReportRow")
        .def_readonly("instance_index", &ReportRow::instance_index)
        .def_readonly("true_class", &ReportRow::true_class)
        .def_readonly("predicted_class", &ReportRow::predicted_class)
        .def_readonly("correct", &ReportRow::correct)
        .def_readonly("u_m", &ReportRow::u_m)
        .def_readonly("u_H", &ReportRow::u_H)
        .def_readonly("u_a", &ReportRow::u_a)
        .def_readonly("u_t", &ReportRow::u_t)
        .def_readonly("u_e_literal", &ReportRow::u_e_literal)
        .def_readonly("u_e_standard", &ReportRow::u_e_standard)
        .def_readonly("eps_glob", &ReportRow::eps_glob)
        .def_readonly("eps_loc", &ReportRow::eps_loc);

    py::class_<ReliabilityReport>(m, "ReliabilityReport")
        .def_readonly("rows", &ReliabilityReport::rows)
        .def_readonly("alpha_selected", &ReliabilityReport::alpha_selected)
        .def_readonly("n_train", &ReliabilityReport::n_train)
        .def_readonly("gamma", &ReliabilityReport::gamma)
        .def_readonly("shift_tv", &ReliabilityReport::shift_tv)
        .def("correct_count", &ReliabilityReport::correct_count);

    py::class_<SingleConfig>(m, "SingleConfig")
        .def(py::init<>())
        .def_readwrite("alpha_grid", &SingleConfig::alpha_grid)
        .def_readwrite("folds", &SingleConfig::folds)
        .def_readwrite("ensemble_size", &SingleConfig::ensemble_size)
        .def_readwrite("bisection_tol", &SingleConfig::bisection_tol)
        .def_readwrite("cv_seed", &SingleConfig::cv_seed)
        .def_readwrite("bootstrap_seed", &SingleConfig::bootstrap_seed);

    m.def("run_single", &run_single, py::arg("train"), py::arg("test"), py::arg("config"));

    py::class_<AccuracyAcceptanceCurve>(m, "AccuracyAcceptanceCurve")
        .def_readonly("metric_name", &AccuracyAcceptanceCurve::metric_name)
        .def_readonly("accuracy", &AccuracyAcceptanceCurve::accuracy);

    m.def("accuracy_acceptance", &accuracy_acceptance, py::arg("report"), py::arg("metric_name"));

    py::class_<GridConfig>(m, "GridConfig")
        .def(py::init<>())
        .def_readwrite("generator", &GridConfig::generator)
        .def_readwrite("n_train_values", &GridConfig::n_train_values)
        .def_readwrite("gamma_values", &GridConfig::gamma_values)
        .def_readwrite("n_test", &GridConfig::n_test)
        .def_readwrite("n_shift", &GridConfig::n_shift)
        .def_readwrite("n_train_sets", &GridConfig::n_train_sets)
        .def_readwrite("single", &GridConfig::single)
        .def_readwrite("master_seed", &GridConfig::master_seed)
        .def_readwrite("workers", &GridConfig::workers);

    py::class_<CellStats>(m, "CellStats")
        .def_readonly("n_train", &CellStats::n_train)
        .def_readonly("gamma", &CellStats::gamma)
        .def("mean_curve", [](const CellStats& c, const std::string& metric) {
            return c.mean[static_cast<std::size_t>(metric_index(metric))];
        }, py::arg("metric"))
        .def("std_curve", [](const CellStats& c, const std::string& metric) {
            return c.stddev[static_cast<std::size_t>(metric_index(metric))];
        }, py::arg("metric"));

    py::class_<GridStats>(m, "GridStats")
        .def_readonly("cells", &GridStats::cells)
        .def_readonly("n_test", &GridStats::n_test)
        .def("cell", &GridStats::cell, py::arg("n_train"), py::arg("gamma"),
             py::return_value_policy::reference_internal);

    m.def("run_grid", &run_grid, py::arg("config"), py::call_guard<py::gil_scoped_release>());
    m.def("write_curves_csv",
          py::overload_cast<const GridStats&, const std::string&>(&write_curves_csv),
          py::arg("stats"), py::arg("path"));
    m.def("read_curves_csv", py::overload_cast<const std::string&>(&read_curves_csv), py::arg("path"));
    m.def("write_report_csv",
          py::overload_cast<const ReliabilityReport&, const std::string&, bool>(&write_report_csv),
          py::arg("report"), py::arg("path"), py::arg("with_metadata") = true);
    m.def("read_report_csv", py::overload_cast<const std::string&>(&read_report_csv), py::arg("path"));

    py::enum_<CurveKind>(m, "CurveKind")
        .value("mean", CurveKind::mean)
        .value("stddev", CurveKind::stddev);
    m.def("write_grid_svg", &write_grid_svg, py::arg("stats"), py::arg("path"), py::arg("kind"));

    m.attr("METRIC_NAMES") = std::vector<std::string>(kMetricNames.begin(), kMetricNames.end());
}
