#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "robnbc/rng.hpp"
#include "robnbc/uncertainty.hpp"

using namespace robnbc;

namespace {

Dataset random_dataset(const DomainSpec& dom, std::size_t n, std::uint64_t seed) {
    SplitMix64 rng(seed);
    Dataset ds;
    ds.domain = dom;
    for (std::size_t k = 0; k < n; ++k) {
        LabeledInstance inst;
        inst.class_index = static_cast<int>(rng.bounded(static_cast<std::uint64_t>(dom.num_classes)));
        for (int card : dom.feature_cards)
            inst.feature_values.push_back(static_cast<int>(rng.bounded(static_cast<std::uint64_t>(card))));
        ds.instances.push_back(std::move(inst));
    }
    return ds;
}

NbcModel posterior_model(std::vector<double> marginal) {
    const int k = static_cast<int>(marginal.size());
    DomainSpec dom(k, {2});
    std::vector<std::vector<MassFunction>> conds;
    for (int c = 0; c < k; ++c) conds.push_back({MassFunction(std::vector<double>{1.0, 0.0})});
    return NbcModel{dom, MassFunction(std::move(marginal)), std::move(conds), 0.0};
}

Ensemble two_member_ensemble(std::vector<double> marg_a, std::vector<double> marg_b) {
    Ensemble ens;
    ens.members.push_back(posterior_model(std::move(marg_a)));
    ens.members.push_back(posterior_model(std::move(marg_b)));
    return ens;
}

} // namespace

TEST_CASE("entropy_bits") {
    CHECK(entropy_bits(std::vector<double>{1, 0, 0}) == 0.0);
    CHECK(entropy_bits(std::vector<double>{0.5, 0.5, 0}) == 1.0);
    CHECK(entropy_bits(std::vector<double>{1.0 / 3, 1.0 / 3, 1.0 / 3}) ==
          doctest::Approx(std::log2(3.0)).epsilon(1e-15));
}

TEST_CASE("max_prob_uncertainty") {
    const std::vector<int> f{0};
    CHECK(max_prob_uncertainty(posterior_model({1, 0, 0}), f) == 0.0);
    CHECK(max_prob_uncertainty(posterior_model({1.0 / 3, 1.0 / 3, 1.0 / 3}), f) ==
          doctest::Approx(2.0 / 3).epsilon(1e-15));
    CHECK(max_prob_uncertainty(posterior_model({0.7, 0.2, 0.1}), f) ==
          doctest::Approx(0.3).epsilon(1e-14));
    CHECK_THROWS_AS(max_prob_uncertainty(posterior_model({1, 0}), std::vector<int>{1}),
                    std::invalid_argument);
}

TEST_CASE("entropy_uncertainty") {
    const std::vector<int> f{0};
    CHECK(entropy_uncertainty(posterior_model({1.0 / 3, 1.0 / 3, 1.0 / 3}), f) ==
          doctest::Approx(1.58496).epsilon(1e-5));
    CHECK(entropy_uncertainty(posterior_model({1, 0, 0}), f) == 0.0);
    CHECK(entropy_uncertainty(posterior_model({0.5, 0.5, 0}), f) == 1.0);
}

TEST_CASE("fit_ensemble") {
    DomainSpec dom(2, {2});
    Dataset constant;
    constant.domain = dom;
    for (int k = 0; k < 8; ++k) constant.instances.push_back({0, {1}});

    // resampling a constant dataset: all members identical
    const Ensemble ens = fit_ensemble(constant, 1.0, 10, 5);
    CHECK(ens.size() == 10);
    for (const NbcModel& member : ens.members) {
        CHECK(member.class_prob(0) == ens.members.front().class_prob(0));
        CHECK(member.cond_prob(0, 0, 1) == ens.members.front().cond_prob(0, 0, 1));
    }

    // bit-identical across runs with the same inputs
    const Dataset data = random_dataset(DomainSpec(3, {2, 3}), 30, 42);
    const Ensemble a = fit_ensemble(data, 0.5, 10, 77);
    const Ensemble b = fit_ensemble(data, 0.5, 10, 77);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (int c = 0; c < 3; ++c)
            CHECK(a.members[i].class_prob(c) == b.members[i].class_prob(c));

    CHECK_THROWS_AS(fit_ensemble(data, 0.0, 10, 1), std::invalid_argument);
    CHECK_THROWS_AS(fit_ensemble(data, 1.0, 1, 1), std::invalid_argument);
}

TEST_CASE("aleatoric / total / epistemic on hand-built ensembles") {
    const std::vector<int> f{0};

    // identical members collapse to the single-member entropy
    Ensemble same = two_member_ensemble({0.5, 0.5}, {0.5, 0.5});
    CHECK(aleatoric_uncertainty(same, f) == 1.0);
    CHECK(total_uncertainty(same, f) == 1.0);
    CHECK(epistemic_uncertainty(same, f).literal == 0.0);
    CHECK(epistemic_uncertainty(same, f).standard == 0.0);

    // members [1,0] and [0,1]: aleatoric 0, total 1, literal epistemic -1
    Ensemble disjoint = two_member_ensemble({1, 0}, {0, 1});
    CHECK(aleatoric_uncertainty(disjoint, f) == 0.0);
    CHECK(total_uncertainty(disjoint, f) == 1.0);
    CHECK(epistemic_uncertainty(disjoint, f).literal == -1.0);
    CHECK(epistemic_uncertainty(disjoint, f).standard == 1.0);

    // members [0.5,0.5] and [1,0]: aleatoric is the mean of 1 and 0
    Ensemble half = two_member_ensemble({0.5, 0.5}, {1, 0});
    CHECK(aleatoric_uncertainty(half, f) == 0.5);
}

TEST_CASE("Jensen: total >= aleatoric on 1000 random ensembles") {
    SplitMix64 rng(2718);
    DomainSpec dom(3, {2, 3});
    std::vector<int> f(2);
    for (int trial = 0; trial < 1000; ++trial) {
        const Dataset data = random_dataset(dom, 5 + rng.bounded(30), rng.next());
        const Ensemble ens = fit_ensemble(data, 0.05 + rng.uniform(), 4, rng.next());
        f[0] = static_cast<int>(rng.bounded(2));
        f[1] = static_cast<int>(rng.bounded(3));
        const double ua = aleatoric_uncertainty(ens, f);
        const double ut = total_uncertainty(ens, f);
        CHECK(ua <= ut + 1e-12);
        CHECK(epistemic_uncertainty(ens, f).literal <= 1e-12);
    }
}

TEST_CASE("metric bounds on fitted models") {
    SplitMix64 rng(99);
    DomainSpec dom(3, {2, 3, 3, 4});
    const double log2_classes = std::log2(3.0);
    for (int trial = 0; trial < 20; ++trial) {
        const Dataset data = random_dataset(dom, 25, rng.next());
        const NbcModel model = fit(data, 1.0);
        const Ensemble ens = fit_ensemble(data, 1.0, 10, rng.next());
        std::vector<int> f(4);
        for (f[0] = 0; f[0] < 2; ++f[0])
            for (f[1] = 0; f[1] < 3; ++f[1])
                for (f[2] = 0; f[2] < 3; ++f[2])
                    for (f[3] = 0; f[3] < 4; ++f[3]) {
                        const double um = max_prob_uncertainty(model, f);
                        CHECK(um >= 0.0);
                        CHECK(um <= 1.0 - 1.0 / 3 + 1e-15);
                        for (double h : {entropy_uncertainty(model, f),
                                         aleatoric_uncertainty(ens, f), total_uncertainty(ens, f)}) {
                            CHECK(h >= 0.0);
                            CHECK(h <= log2_classes + 1e-12);
                        }
                    }
    }
}
