#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "robnbc/nbc.hpp"

namespace robnbc {

// Bootstrap ensemble of NBC models, all sharing one domain and one alpha.
// Member i is fit on a with-replacement resample of the dataset drawn with
// seed source_seed + i.
struct Ensemble {
    std::vector<NbcModel> members;
    std::uint64_t source_seed = 0;

    std::size_t size() const { return members.size(); }
};

Ensemble fit_ensemble(const Dataset& dataset, double alpha, int m, std::uint64_t seed);

// One minus the posterior probability of the predicted class.
double max_prob_uncertainty(const NbcModel& model, std::span<const int> f);

// Shannon entropy (log base 2) of the class posterior.
double entropy_uncertainty(const NbcModel& model, std::span<const int> f);

// Mean member-posterior entropy.
double aleatoric_uncertainty(const Ensemble& ensemble, std::span<const int> f);

// Entropy of the mean member posterior.
double total_uncertainty(const Ensemble& ensemble, std::span<const int> f);

// Both sign conventions for the aleatoric/total difference. The literal
// value u_a - u_t is non-positive by Jensen's inequality; the standard value
// u_t - u_a is what the experiment harness orders by.
struct EpistemicValue {
    double literal = 0.0;   // u_a - u_t
    double standard = 0.0;  // u_t - u_a
};

EpistemicValue epistemic_uncertainty(const Ensemble& ensemble, std::span<const int> f);

// -sum p log2 p with 0*log2(0) = 0.
double entropy_bits(std::span<const double> probs);

} // namespace robnbc
