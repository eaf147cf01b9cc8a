#include "robnbc/uncertainty.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "robnbc/rng.hpp"

namespace robnbc {

double entropy_bits(std::span<const double> probs) {
    double h = 0.0;
    for (double p : probs)
        if (p > 0.0) h -= p * std::log2(p);
    return h;
}

Ensemble fit_ensemble(const Dataset& dataset, double alpha, int m, std::uint64_t seed) {
    if (dataset.instances.empty())
        throw std::invalid_argument("fit_ensemble: empty dataset");
    if (!(alpha > 0.0))
        throw std::invalid_argument("fit_ensemble: alpha must be positive");
    if (m < 2)
        throw std::invalid_argument("fit_ensemble: need at least 2 members");

    Ensemble ens;
    ens.source_seed = seed;
    ens.members.reserve(static_cast<std::size_t>(m));
    const std::size_t n = dataset.instances.size();
    for (int i = 0; i < m; ++i) {
        SplitMix64 rng(seed + static_cast<std::uint64_t>(i));
        Dataset resample;
        resample.domain = dataset.domain;
        resample.instances.reserve(n);
        for (std::size_t k = 0; k < n; ++k)
            resample.instances.push_back(dataset.instances[rng.bounded(n)]);
        ens.members.push_back(fit(resample, alpha));
    }
    return ens;
}

double max_prob_uncertainty(const NbcModel& model, std::span<const int> f) {
    const MassFunction post = posterior(model, f);
    return 1.0 - *std::max_element(post.probs().begin(), post.probs().end());
}

double entropy_uncertainty(const NbcModel& model, std::span<const int> f) {
    return entropy_bits(posterior(model, f).probs());
}

double aleatoric_uncertainty(const Ensemble& ensemble, std::span<const int> f) {
    double sum = 0.0;
    for (const NbcModel& member : ensemble.members)
        sum += entropy_bits(posterior(member, f).probs());
    return sum / static_cast<double>(ensemble.size());
}

double total_uncertainty(const Ensemble& ensemble, std::span<const int> f) {
    std::vector<double> avg(static_cast<std::size_t>(ensemble.members.front().domain.num_classes), 0.0);
    for (const NbcModel& member : ensemble.members) {
        const MassFunction post = posterior(member, f);
        for (std::size_t c = 0; c < avg.size(); ++c) avg[c] += post[c];
    }
    for (double& p : avg) p /= static_cast<double>(ensemble.size());
    return entropy_bits(avg);
}

EpistemicValue epistemic_uncertainty(const Ensemble& ensemble, std::span<const int> f) {
    const double ua = aleatoric_uncertainty(ensemble, f);
    const double ut = total_uncertainty(ensemble, f);
    return EpistemicValue{ua - ut, ut - ua};
}

} // namespace robnbc
