#include "robnbc/domain.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "robnbc/errors.hpp"
#include "robnbc/rng.hpp"
#include "robnbc/text.hpp"

namespace robnbc {

namespace {

constexpr std::size_t kMaxJointCells = 10'000'000;

void check_probs(const std::vector<double>& probs, double tol, const char* what) {
    if (probs.empty())
        throw std::invalid_argument(std::string(what) + ": empty probability vector");
    double sum = 0.0;
    for (double p : probs) {
        if (!(p >= 0.0))
            throw std::invalid_argument(std::string(what) + ": negative or NaN entry");
        sum += p;
    }
    if (std::abs(sum - 1.0) > tol)
        throw std::invalid_argument(std::string(what) + ": entries sum to " + format_double(sum) +
                                    ", not 1 within " + format_double(tol));
}

} // namespace

DomainSpec::DomainSpec(int num_classes, std::vector<int> feature_cards)
    : num_classes(num_classes), feature_cards(std::move(feature_cards)) {
    if (this->num_classes < 2)
        throw std::invalid_argument("DomainSpec: need at least 2 classes");
    if (this->feature_cards.empty())
        throw std::invalid_argument("DomainSpec: need at least 1 feature");
    std::size_t cells = static_cast<std::size_t>(this->num_classes);
    for (int card : this->feature_cards) {
        if (card < 2)
            throw std::invalid_argument("DomainSpec: every feature cardinality must be >= 2");
        if (cells > kMaxJointCells / static_cast<std::size_t>(card))
            throw std::invalid_argument("DomainSpec: joint table exceeds the dense-table budget");
        cells *= static_cast<std::size_t>(card);
    }
}

std::size_t DomainSpec::num_feature_vectors() const {
    std::size_t n = 1;
    for (int card : feature_cards) n *= static_cast<std::size_t>(card);
    return n;
}

std::size_t DomainSpec::feature_flat_index(std::span<const int> f) const {
    check_feature_vector(f);
    std::size_t idx = 0;
    for (std::size_t i = 0; i < f.size(); ++i)
        idx = idx * static_cast<std::size_t>(feature_cards[i]) + static_cast<std::size_t>(f[i]);
    return idx;
}

std::size_t DomainSpec::flat_index(int c, std::span<const int> f) const {
    if (c < 0 || c >= num_classes)
        throw std::invalid_argument("class index out of range");
    return static_cast<std::size_t>(c) * num_feature_vectors() + feature_flat_index(f);
}

void DomainSpec::decode(std::size_t flat, int& c, std::vector<int>& f) const {
    const std::size_t nf = num_feature_vectors();
    c = static_cast<int>(flat / nf);
    std::size_t rest = flat % nf;
    f.resize(feature_cards.size());
    for (std::size_t i = feature_cards.size(); i-- > 0;) {
        const std::size_t card = static_cast<std::size_t>(feature_cards[i]);
        f[i] = static_cast<int>(rest % card);
        rest /= card;
    }
}

void DomainSpec::check_feature_vector(std::span<const int> f) const {
    if (f.size() != feature_cards.size())
        throw std::invalid_argument("feature vector length does not match domain");
    for (std::size_t i = 0; i < f.size(); ++i)
        if (f[i] < 0 || f[i] >= feature_cards[i])
            throw std::invalid_argument("feature value out of range at position " + std::to_string(i));
}

MassFunction::MassFunction(std::vector<double> probs) : probs_(std::move(probs)) {
    check_probs(probs_, 1e-12, "MassFunction");
}

JointMassFunction::JointMassFunction(DomainSpec domain, std::vector<double> probs, double tol)
    : domain_(std::move(domain)), probs_(std::move(probs)) {
    if (probs_.size() != domain_.joint_size())
        throw std::invalid_argument("JointMassFunction: table size does not match domain");
    check_probs(probs_, tol, "JointMassFunction");
}

void Dataset::check() const {
    for (const LabeledInstance& inst : instances) {
        if (inst.class_index < 0 || inst.class_index >= domain.num_classes)
            throw std::invalid_argument("Dataset: class index out of range");
        domain.check_feature_vector(inst.feature_values);
    }
}

MassFunction normalize(std::span<const double> weights) {
    double sum = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0))
            throw std::invalid_argument("normalize: negative or NaN weight");
        sum += w;
    }
    if (sum <= 0.0)
        throw std::invalid_argument("normalize: degenerate weight vector (all zero)");
    std::vector<double> probs(weights.begin(), weights.end());
    for (double& p : probs) p /= sum;
    return MassFunction(std::move(probs));
}

namespace {

std::vector<double> mix_tables(const std::vector<double>& p, const std::vector<double>& q, double w) {
    if (!(w >= 0.0 && w <= 1.0))
        throw std::invalid_argument("mix: weight must lie in [0, 1]");
    std::vector<double> out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) out[i] = (1.0 - w) * p[i] + w * q[i];
    return out;
}

} // namespace

MassFunction mix(const MassFunction& p, const MassFunction& q, double w) {
    if (p.size() != q.size())
        throw std::invalid_argument("mix: mass functions have different sizes");
    return MassFunction(mix_tables(p.probs(), q.probs(), w));
}

JointMassFunction mix(const JointMassFunction& p, const JointMassFunction& q, double w) {
    if (p.domain() != q.domain())
        throw std::invalid_argument("mix: joints are over different domains");
    return JointMassFunction(p.domain(), mix_tables(p.probs(), q.probs(), w));
}

MassFunction condition_on_features(const JointMassFunction& joint, std::span<const int> f) {
    const DomainSpec& dom = joint.domain();
    std::vector<double> slice(static_cast<std::size_t>(dom.num_classes));
    double marginal = 0.0;
    for (int c = 0; c < dom.num_classes; ++c) {
        slice[static_cast<std::size_t>(c)] = joint.at(c, f);
        marginal += slice[static_cast<std::size_t>(c)];
    }
    if (marginal <= 0.0)
        throw std::invalid_argument("condition_on_features: zero feature marginal");
    for (double& p : slice) p /= marginal;
    return MassFunction(std::move(slice));
}

MassFunction class_marginal(const JointMassFunction& joint) {
    const DomainSpec& dom = joint.domain();
    const std::size_t nf = dom.num_feature_vectors();
    std::vector<double> marg(static_cast<std::size_t>(dom.num_classes), 0.0);
    for (int c = 0; c < dom.num_classes; ++c) {
        double sum = 0.0;
        for (std::size_t k = 0; k < nf; ++k) sum += joint[static_cast<std::size_t>(c) * nf + k];
        marg[static_cast<std::size_t>(c)] = sum;
    }
    double total = 0.0;
    for (double m : marg) total += m;
    for (double& m : marg) m /= total;
    return MassFunction(std::move(marg));
}

namespace {

// Inverse-CDF draw: the first outcome whose cumulative mass exceeds
// u * total. Zero-mass outcomes are never selected.
std::vector<std::size_t> sample_flat(const std::vector<double>& probs, std::size_t n, std::uint64_t seed) {
    std::vector<double> cdf(probs.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        acc += probs[i];
        cdf[i] = acc;
    }
    const double total = acc;
    SplitMix64 rng(seed);
    std::vector<std::size_t> out;
    out.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double target = rng.uniform() * total;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), target);
        if (it == cdf.end()) --it;
        out.push_back(static_cast<std::size_t>(it - cdf.begin()));
    }
    return out;
}

} // namespace

std::vector<int> sample(const MassFunction& dist, std::size_t n, std::uint64_t seed) {
    std::vector<std::size_t> flat = sample_flat(dist.probs(), n, seed);
    std::vector<int> out(flat.size());
    std::transform(flat.begin(), flat.end(), out.begin(), [](std::size_t i) { return static_cast<int>(i); });
    return out;
}

Dataset sample(const JointMassFunction& dist, std::size_t n, std::uint64_t seed) {
    std::vector<std::size_t> flat = sample_flat(dist.probs(), n, seed);
    Dataset ds;
    ds.domain = dist.domain();
    ds.instances.resize(flat.size());
    for (std::size_t k = 0; k < flat.size(); ++k)
        ds.domain.decode(flat[k], ds.instances[k].class_index, ds.instances[k].feature_values);
    return ds;
}

double total_variation(const JointMassFunction& p, const JointMassFunction& q) {
    if (p.domain() != q.domain())
        throw std::invalid_argument("total_variation: joints are over different domains");
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) sum += std::abs(p[i] - q[i]);
    return 0.5 * sum;
}

void write_joint_csv(const JointMassFunction& joint, std::ostream& out) {
    const DomainSpec& dom = joint.domain();
    out << "class";
    for (int i = 1; i <= dom.num_features(); ++i) out << ",f" << i;
    out << ",prob\n";
    int c = 0;
    std::vector<int> f;
    for (std::size_t idx = 0; idx < joint.size(); ++idx) {
        dom.decode(idx, c, f);
        out << c;
        for (int v : f) out << ',' << v;
        out << ',' << format_double(joint[idx]) << '\n';
    }
}

void write_joint_csv(const JointMassFunction& joint, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open for writing", path);
    write_joint_csv(joint, out);
    if (!out) throw io_error("write failed", path);
}

JointMassFunction read_joint_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw parse_error("empty joint CSV", 1);
    auto header = split(strip(line), ',');
    if (header.size() < 3 || header.front() != "class" || header.back() != "prob")
        throw parse_error("expected header class,f1,...,fN,prob", 1);
    const std::size_t n_features = header.size() - 2;

    // First pass: collect rows; the domain is recovered from the maxima.
    struct Row { int c; std::vector<int> f; double p; };
    std::vector<Row> rows;
    int max_class = 0;
    std::vector<int> max_value(n_features, 0);
    long line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        auto s = strip(line);
        if (s.empty()) continue;
        auto cells = split(s, ',');
        if (cells.size() != header.size())
            throw parse_error("wrong number of columns", line_no);
        Row row;
        row.c = static_cast<int>(parse_long(strip(cells[0]), line_no));
        row.f.resize(n_features);
        for (std::size_t i = 0; i < n_features; ++i) {
            row.f[i] = static_cast<int>(parse_long(strip(cells[i + 1]), line_no));
            max_value[i] = std::max(max_value[i], row.f[i]);
        }
        row.p = parse_double(strip(cells.back()), line_no);
        max_class = std::max(max_class, row.c);
        rows.push_back(std::move(row));
    }
    std::vector<int> cards(n_features);
    for (std::size_t i = 0; i < n_features; ++i) cards[i] = max_value[i] + 1;
    DomainSpec dom(max_class + 1, cards);
    if (rows.size() != dom.joint_size())
        throw parse_error("joint CSV does not enumerate the full domain");
    std::vector<double> probs(dom.joint_size());
    for (const Row& row : rows) probs[dom.flat_index(row.c, row.f)] = row.p;
    return JointMassFunction(std::move(dom), std::move(probs));
}

JointMassFunction read_joint_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open", path);
    return read_joint_csv(in);
}

void write_dataset_csv(const Dataset& dataset, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open for writing", path);
    out << "class";
    for (int i = 1; i <= dataset.domain.num_features(); ++i) out << ",f" << i;
    out << '\n';
    for (const LabeledInstance& inst : dataset.instances) {
        out << inst.class_index;
        for (int v : inst.feature_values) out << ',' << v;
        out << '\n';
    }
    if (!out) throw io_error("write failed", path);
}

Dataset read_dataset_csv(const DomainSpec& domain, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open", path);
    std::string line;
    if (!std::getline(in, line)) throw parse_error("empty dataset CSV", 1);
    auto header = split(strip(line), ',');
    if (header.empty() || header.front() != "class" ||
        header.size() != static_cast<std::size_t>(domain.num_features()) + 1)
        throw parse_error("expected header class,f1,...,fN matching the domain", 1);

    Dataset ds;
    ds.domain = domain;
    long line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        auto s = strip(line);
        if (s.empty()) continue;
        auto cells = split(s, ',');
        if (cells.size() != header.size())
            throw parse_error("wrong number of columns", line_no);
        LabeledInstance inst;
        inst.class_index = static_cast<int>(parse_long(strip(cells[0]), line_no));
        inst.feature_values.resize(cells.size() - 1);
        for (std::size_t i = 1; i < cells.size(); ++i)
            inst.feature_values[i - 1] = static_cast<int>(parse_long(strip(cells[i]), line_no));
        if (inst.class_index < 0 || inst.class_index >= domain.num_classes)
            throw parse_error("class index out of range", line_no);
        try {
            domain.check_feature_vector(inst.feature_values);
        } catch (const std::invalid_argument& e) {
            throw parse_error(e.what(), line_no);
        }
        ds.instances.push_back(std::move(inst));
    }
    return ds;
}

} // namespace robnbc
