#pragma once

// Shared helpers for the test suites: random models/datasets and a rank-1
// residual that measures how far a class slice is from an NBC factorization.

#include <cmath>
#include <vector>

#include "robnbc/nbc.hpp"
#include "robnbc/rng.hpp"

namespace robnbc::testsupport {

inline Dataset random_dataset(const DomainSpec& dom, std::size_t n, std::uint64_t seed) {
    SplitMix64 rng(seed);
    Dataset ds;
    ds.domain = dom;
    ds.instances.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        LabeledInstance inst;
        inst.class_index = static_cast<int>(rng.bounded(static_cast<std::uint64_t>(dom.num_classes)));
        for (int card : dom.feature_cards)
            inst.feature_values.push_back(static_cast<int>(rng.bounded(static_cast<std::uint64_t>(card))));
        ds.instances.push_back(std::move(inst));
    }
    return ds;
}

inline MassFunction random_mass(std::size_t size, SplitMix64& rng) {
    std::vector<double> w(size);
    for (double& x : w) x = rng.uniform() + 1e-3;
    return normalize(w);
}

inline NbcModel random_model(const DomainSpec& dom, std::uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<std::vector<MassFunction>> conds;
    for (int c = 0; c < dom.num_classes; ++c) {
        std::vector<MassFunction> per_feature;
        for (int card : dom.feature_cards)
            per_feature.push_back(random_mass(static_cast<std::size_t>(card), rng));
        conds.push_back(std::move(per_feature));
    }
    MassFunction marg = random_mass(static_cast<std::size_t>(dom.num_classes), rng);
    return NbcModel{dom, std::move(marg), std::move(conds), 0.0};
}

// Largest absolute difference between a class slice and the outer product of
// its per-feature marginals. Zero (up to rounding) exactly when the slice
// factorizes.
inline double rank1_residual(const JointMassFunction& joint, int c) {
    const DomainSpec& dom = joint.domain();
    const int n_features = dom.num_features();
    std::vector<std::vector<double>> marginals(static_cast<std::size_t>(n_features));
    for (int i = 0; i < n_features; ++i)
        marginals[static_cast<std::size_t>(i)].assign(
            static_cast<std::size_t>(dom.feature_cards[static_cast<std::size_t>(i)]), 0.0);
    double total = 0.0;

    const std::size_t nf = dom.num_feature_vectors();
    int cc = 0;
    std::vector<int> f;
    for (std::size_t k = 0; k < nf; ++k) {
        dom.decode(static_cast<std::size_t>(c) * nf + k, cc, f);
        const double p = joint[static_cast<std::size_t>(c) * nf + k];
        total += p;
        for (int i = 0; i < n_features; ++i)
            marginals[static_cast<std::size_t>(i)][static_cast<std::size_t>(f[i])] += p;
    }
    if (total <= 0.0) return 0.0;

    double residual = 0.0;
    for (std::size_t k = 0; k < nf; ++k) {
        dom.decode(static_cast<std::size_t>(c) * nf + k, cc, f);
        double expected = total;
        for (int i = 0; i < n_features; ++i)
            expected *= marginals[static_cast<std::size_t>(i)][static_cast<std::size_t>(f[i])] / total;
        residual = std::max(residual,
                            std::abs(expected - joint[static_cast<std::size_t>(c) * nf + k]));
    }
    return residual;
}

// Every feature vector of a domain, in enumeration order.
inline std::vector<std::vector<int>> all_feature_vectors(const DomainSpec& dom) {
    std::vector<std::vector<int>> out;
    out.reserve(dom.num_feature_vectors());
    int c = 0;
    std::vector<int> f;
    for (std::size_t k = 0; k < dom.num_feature_vectors(); ++k) {
        dom.decode(k, c, f);
        out.push_back(f);
    }
    return out;
}

} // namespace robnbc::testsupport
