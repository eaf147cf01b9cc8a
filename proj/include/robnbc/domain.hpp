#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace robnbc {

// Finite categorical domain: one class variable with num_classes values and
// N features with the given cardinalities. Outcome enumeration is fixed
// project-wide: class index slowest, then features in declaration order,
// each ascending. Inverse-CDF sampling and CSV dumps rely on this order.
struct DomainSpec {
    int num_classes = 0;
    std::vector<int> feature_cards;

    DomainSpec() = default;
    DomainSpec(int num_classes, std::vector<int> feature_cards);

    int num_features() const { return static_cast<int>(feature_cards.size()); }
    std::size_t num_feature_vectors() const;
    std::size_t joint_size() const { return static_cast<std::size_t>(num_classes) * num_feature_vectors(); }

    std::size_t feature_flat_index(std::span<const int> f) const;
    std::size_t flat_index(int c, std::span<const int> f) const;
    void decode(std::size_t flat, int& c, std::vector<int>& f) const;

    void check_feature_vector(std::span<const int> f) const;

    bool operator==(const DomainSpec&) const = default;
};

// Probability mass function over a finite outcome set. Entries are
// non-negative and sum to one within 1e-12 (checked at construction).
class MassFunction {
public:
    explicit MassFunction(std::vector<double> probs);

    std::size_t size() const { return probs_.size(); }
    double operator[](std::size_t i) const { return probs_[i]; }
    const std::vector<double>& probs() const { return probs_; }

private:
    std::vector<double> probs_;
};

// Dense joint mass function over class x features, row-major in the fixed
// enumeration order. Validation tolerance defaults to 1e-12; callers that
// assemble the table as a product of local mass functions (NBC joints,
// contamination vertices) pass 1e-10 to absorb the extra accumulation.
class JointMassFunction {
public:
    JointMassFunction(DomainSpec domain, std::vector<double> probs, double tol = 1e-12);

    const DomainSpec& domain() const { return domain_; }
    std::size_t size() const { return probs_.size(); }
    double operator[](std::size_t i) const { return probs_[i]; }
    double at(int c, std::span<const int> f) const { return probs_[domain_.flat_index(c, f)]; }
    const std::vector<double>& probs() const { return probs_; }

private:
    DomainSpec domain_;
    std::vector<double> probs_;
};

struct LabeledInstance {
    int class_index = 0;
    std::vector<int> feature_values;

    bool operator==(const LabeledInstance&) const = default;
};

// Ordered list of labeled instances. Order is significant: fold assignment
// and bootstrap resampling are order- and seed-deterministic.
struct Dataset {
    DomainSpec domain;
    std::vector<LabeledInstance> instances;

    std::size_t size() const { return instances.size(); }
    void check() const;
};

// Normalizes non-negative weights to a mass function. Rejects negative
// entries and all-zero (degenerate) weight vectors.
MassFunction normalize(std::span<const double> weights);

// Convex mixture (1-w)*p + w*q, entrywise.
MassFunction mix(const MassFunction& p, const MassFunction& q, double w);
JointMassFunction mix(const JointMassFunction& p, const JointMassFunction& q, double w);

// p(c|f) for all classes. Throws if the feature marginal p(f) is zero;
// callers implement the arbitrary-class fallback.
MassFunction condition_on_features(const JointMassFunction& joint, std::span<const int> f);

// p(c) = sum_f p(c, f).
MassFunction class_marginal(const JointMassFunction& joint);

// Seed-deterministic i.i.d. sampling via inverse CDF over the fixed
// enumeration order.
std::vector<int> sample(const MassFunction& dist, std::size_t n, std::uint64_t seed);
Dataset sample(const JointMassFunction& dist, std::size_t n, std::uint64_t seed);

// (1/2) * sum |p - q|.
double total_variation(const JointMassFunction& p, const JointMassFunction& q);

// CSV with header "class,f1,...,fN,prob", rows in the fixed enumeration
// order, probabilities at 17 significant digits.
void write_joint_csv(const JointMassFunction& joint, std::ostream& out);
void write_joint_csv(const JointMassFunction& joint, const std::string& path);
JointMassFunction read_joint_csv(std::istream& in);
JointMassFunction read_joint_csv(const std::string& path);

// CSV with header "class,f1,...,fN", one row per instance.
void write_dataset_csv(const Dataset& dataset, const std::string& path);
Dataset read_dataset_csv(const DomainSpec& domain, const std::string& path);

} // namespace robnbc
