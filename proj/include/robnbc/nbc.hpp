#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "robnbc/domain.hpp"

namespace robnbc {

// Exact per-class and per-class-per-feature-value counts of a dataset.
struct CountTable {
    std::size_t n = 0;
    std::vector<std::size_t> n_c;                          // [class]
    std::vector<std::vector<std::vector<std::size_t>>> n_cf;  // [class][feature][value]
};

CountTable count_table(const Dataset& dataset);

// Naive Bayes classifier: class marginal p(c) plus per-class per-feature
// conditionals p(f_i|c). The joint factorizes as p(c) * prod_i p(f_i|c).
struct NbcModel {
    DomainSpec domain;
    MassFunction class_marginal;
    std::vector<std::vector<MassFunction>> conditionals;  // [class][feature]
    double alpha = 0.0;

    double class_prob(int c) const { return class_marginal[static_cast<std::size_t>(c)]; }
    double cond_prob(int c, int feature, int value) const {
        return conditionals[static_cast<std::size_t>(c)][static_cast<std::size_t>(feature)]
                           [static_cast<std::size_t>(value)];
    }
};

// Dirichlet-multinomial posterior-predictive fit:
//   p(c)      = (n(c) + alpha) / (n + alpha*|C|)
//   p(f_i|c)  = (n(c,f_i) + alpha) / (n(c) + alpha*|F_i|)
// alpha = 0 requires every class to appear at least once.
NbcModel fit(const Dataset& dataset, double alpha);

// p(c, f) = p(c) * prod_i p(f_i|c), multiplied in declaration order. Other
// joint evaluations in this project (to_joint, contamination vertices) use
// the same order so that equal inputs give bit-equal products.
double joint_prob(const NbcModel& model, int c, std::span<const int> f);

// Relative tie tolerance for argmax detection.
inline constexpr double kTieRelTol = 1e-12;

struct Prediction {
    int predicted_class = 0;           // lowest-index member of argmax_set
    std::vector<int> argmax_set;       // ascending
    bool tied() const { return argmax_set.size() != 1; }
};

// Argmax of the joint over classes; ties within kTieRelTol (relative to the
// maximum) are merged. All-zero joints predict class 0 with every class tied.
Prediction predict(const NbcModel& model, std::span<const int> f);

// p(c|f); throws on zero feature marginal.
MassFunction posterior(const NbcModel& model, std::span<const int> f);

struct AlphaSelection {
    double alpha = 0.0;
    std::vector<double> cv_accuracy;  // one entry per grid point, in grid order
};

// k-fold cross-validated smoothing selection: seeded shuffle, contiguous
// folds with sizes differing by at most one, mean held-out accuracy per grid
// point, ties broken toward the smallest alpha.
AlphaSelection select_alpha(const Dataset& dataset, std::span<const double> grid,
                            int folds, std::uint64_t seed);

// Conventional log-spaced grid around the Laplace point alpha = 1.
std::vector<double> default_alpha_grid();

// Dense joint table of the model in the fixed enumeration order.
JointMassFunction to_joint(const NbcModel& model);

// Key-value text serialization at 17 significant digits; round-trips
// bit-exactly.
void write_model(const NbcModel& model, std::ostream& out);
void write_model(const NbcModel& model, const std::string& path);
NbcModel read_model(std::istream& in);
NbcModel read_model(const std::string& path);

} // namespace robnbc
