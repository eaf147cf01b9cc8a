#include "robnbc/synthetic.hpp"

#include <stdexcept>

#include "robnbc/rng.hpp"

namespace robnbc {

void GeneratorConfig::check() const {
    if (class_probs.size() != static_cast<std::size_t>(domain.num_classes))
        throw std::invalid_argument("GeneratorConfig: class_probs length must equal num_classes");
    if (!(beta >= 0.0 && beta <= 1.0))
        throw std::invalid_argument("GeneratorConfig: beta must lie in [0, 1]");
    if (!(peak <= 1.0))
        throw std::invalid_argument("GeneratorConfig: peak must be at most 1");
    for (int card : domain.feature_cards)
        if (!(peak > 1.0 / card))
            throw std::invalid_argument("GeneratorConfig: peak must exceed 1/|F_i| to be modal");
}

JointMassFunction make_fixed(const GeneratorConfig& config) {
    config.check();
    const DomainSpec& dom = config.domain;
    const MassFunction class_probs = normalize(config.class_probs);

    std::vector<double> probs(dom.joint_size());
    int c = 0;
    std::vector<int> f;
    for (std::size_t idx = 0; idx < probs.size(); ++idx) {
        dom.decode(idx, c, f);
        double p = class_probs[static_cast<std::size_t>(c)];
        for (std::size_t i = 0; i < f.size(); ++i) {
            const int card = dom.feature_cards[i];
            const int peak_value = c % card;
            p *= (f[i] == peak_value) ? config.peak : (1.0 - config.peak) / (card - 1);
        }
        probs[idx] = p;
    }
    return JointMassFunction(dom, std::move(probs), 1e-10);
}

JointMassFunction make_random(const DomainSpec& domain, std::uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<double> weights(domain.joint_size());
    for (double& w : weights) w = rng.uniform();
    return JointMassFunction(domain, normalize(weights).probs());
}

JointMassFunction make_test(const GeneratorConfig& config) {
    config.check();
    return mix(make_fixed(config), make_random(config.domain, config.seed), config.beta);
}

TrainDistribution make_train(const JointMassFunction& test, double gamma, std::uint64_t seed) {
    if (!(gamma >= 0.0 && gamma <= 1.0))
        throw std::invalid_argument("make_train: gamma must lie in [0, 1]");
    const JointMassFunction shift = make_random(test.domain(), seed);
    JointMassFunction train = mix(test, shift, gamma);
    const double tv = total_variation(train, test);
    return TrainDistribution{std::move(train), tv};
}

Dataset sample_dataset(const JointMassFunction& joint, std::size_t n, std::uint64_t seed) {
    return sample(joint, n, seed);
}

} // namespace robnbc
