#pragma once

#include <cstdint>

#include "robnbc/domain.hpp"

namespace robnbc {

// Configuration of the synthetic test-distribution generator. Defaults
// reproduce the benchmark setup: 3 classes with probabilities
// (0.4, 0.35, 0.25), feature cardinalities (2, 3, 3, 4), peak mass 0.85 and
// mixture weight beta = 0.3.
struct GeneratorConfig {
    DomainSpec domain{3, {2, 3, 3, 4}};
    double beta = 0.3;
    std::vector<double> class_probs{0.4, 0.35, 0.25};
    double peak = 0.85;
    std::uint64_t seed = 0;

    void check() const;
};

// Fixed NBC-factorized joint: for class c and feature i, value (c mod |F_i|)
// carries probability `peak` and the rest of the mass is spread uniformly
// over the other values. The class-dependent peak placement is what
// correlates features with the class.
JointMassFunction make_fixed(const GeneratorConfig& config);

// I.i.d. uniform(0,1) weight per cell, normalized.
JointMassFunction make_random(const DomainSpec& domain, std::uint64_t seed);

// (1-beta) * make_fixed + beta * make_random; the random part breaks the NBC
// factorization.
JointMassFunction make_test(const GeneratorConfig& config);

struct TrainDistribution {
    JointMassFunction joint;
    double shift_tv = 0.0;  // total variation between train and test
};

// (1-gamma) * test + gamma * P_shift with a fresh random P_shift drawn from
// the seed.
TrainDistribution make_train(const JointMassFunction& test, double gamma, std::uint64_t seed);

Dataset sample_dataset(const JointMassFunction& joint, std::size_t n, std::uint64_t seed);

} // namespace robnbc
