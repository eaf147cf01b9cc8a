#pragma once

#include <span>
#include <vector>

#include "robnbc/nbc.hpp"

namespace robnbc {

enum class PerturbationKind { global, local };

// Smallest contamination level at which the prediction stops being robust.
// Always in [0, 1/2]. For the local metric, bracket_lo/bracket_hi hold the
// final bisection bracket; for the global metric and the degenerate cases
// both equal epsilon.
struct RobustnessValue {
    double epsilon = 0.0;
    PerturbationKind kind = PerturbationKind::global;
    bool converged = true;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
};

// Extreme points of an epsilon-contamination perturbation, as full joint
// tables. Global kind: (1-eps)*p + eps*(point mass) for every cell. Local
// kind: every combination of contamination extremes of the NBC's local mass
// functions.
struct PerturbationVertexSet {
    double epsilon = 0.0;
    PerturbationKind kind = PerturbationKind::global;
    std::vector<JointMassFunction> vertices;
};

// Two-stage robustness check over a finite candidate set: every candidate
// must give the predicted class positive mass, and every rival ratio
// p'(c,f)/p'(predicted,f) must stay strictly below one. The positivity stage
// runs first so the ratios are always defined. Exact comparisons; this is
// the brute-force oracle the closed-form metrics are validated against.
bool is_robust_finite(std::span<const JointMassFunction> candidates,
                      std::span<const int> f, int predicted);

// Closed-form global metric: gap / (1 + gap) with
// gap = p(chat,f) - max_{c != chat} p(c,f). Tied or all-zero argmax gives 0.
RobustnessValue global_robustness(const JointMassFunction& joint, std::span<const int> f);
RobustnessValue global_robustness(const NbcModel& model, std::span<const int> f);

// phi(eps) for one rival class: (p(c) + t) * prod_i (p(f_i|c) + t) with
// t = eps/(1-eps). Strictly increasing in eps.
double local_phi(const NbcModel& model, std::span<const int> f, int c, double epsilon);

// max of local_phi over c != predicted; the function whose root is the local
// metric.
double local_phi_max(const NbcModel& model, std::span<const int> f, int predicted, double epsilon);

// Local metric: unique root of phi_max(eps) = p(chat,f), found by bisection
// on [0, 1/2] (the root is pinned there: phi(0) < p(chat,f) <= 1 <= phi(1/2)).
// The final bracket width is below tol and phi - p(chat,f) changes sign
// across it.
RobustnessValue local_robustness(const NbcModel& model, std::span<const int> f, double tol = 1e-9);

PerturbationVertexSet contamination_vertices_global(const JointMassFunction& p, double epsilon);
PerturbationVertexSet contamination_vertices_local(const NbcModel& model, double epsilon);

// Set-valued prediction: the union of argmax classes over the perturbation,
// ascending. Computed by per-class maximality tests (best-case contaminated
// value of c against every rival's worst case); the reduction is exact and
// is validated against vertex enumeration in the tests.
std::vector<int> credal_prediction(const NbcModel& model, std::span<const int> f,
                                   double epsilon, PerturbationKind kind);

} // namespace robnbc
