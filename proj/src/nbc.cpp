#include "robnbc/nbc.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "robnbc/errors.hpp"
#include "robnbc/rng.hpp"
#include "robnbc/text.hpp"

namespace robnbc {

CountTable count_table(const Dataset& dataset) {
    if (dataset.instances.empty())
        throw std::invalid_argument("count_table: empty dataset");
    dataset.check();
    const DomainSpec& dom = dataset.domain;
    CountTable t;
    t.n = dataset.instances.size();
    t.n_c.assign(static_cast<std::size_t>(dom.num_classes), 0);
    t.n_cf.assign(static_cast<std::size_t>(dom.num_classes), {});
    for (int c = 0; c < dom.num_classes; ++c) {
        t.n_cf[static_cast<std::size_t>(c)].resize(dom.feature_cards.size());
        for (std::size_t i = 0; i < dom.feature_cards.size(); ++i)
            t.n_cf[static_cast<std::size_t>(c)][i].assign(static_cast<std::size_t>(dom.feature_cards[i]), 0);
    }
    for (const LabeledInstance& inst : dataset.instances) {
        const auto c = static_cast<std::size_t>(inst.class_index);
        ++t.n_c[c];
        for (std::size_t i = 0; i < inst.feature_values.size(); ++i)
            ++t.n_cf[c][i][static_cast<std::size_t>(inst.feature_values[i])];
    }
    return t;
}

NbcModel fit(const Dataset& dataset, double alpha) {
    if (!(alpha >= 0.0))
        throw std::invalid_argument("fit: alpha must be non-negative");
    const CountTable counts = count_table(dataset);
    const DomainSpec& dom = dataset.domain;
    if (alpha == 0.0) {
        for (std::size_t c = 0; c < counts.n_c.size(); ++c)
            if (counts.n_c[c] == 0)
                throw std::invalid_argument("fit: unsmoothed fit with empty class " + std::to_string(c));
    }

    std::vector<double> marg(static_cast<std::size_t>(dom.num_classes));
    const double denom_c = static_cast<double>(counts.n) + alpha * dom.num_classes;
    for (int c = 0; c < dom.num_classes; ++c)
        marg[static_cast<std::size_t>(c)] =
            (static_cast<double>(counts.n_c[static_cast<std::size_t>(c)]) + alpha) / denom_c;

    std::vector<std::vector<MassFunction>> conds;
    conds.reserve(static_cast<std::size_t>(dom.num_classes));
    for (int c = 0; c < dom.num_classes; ++c) {
        std::vector<MassFunction> per_feature;
        per_feature.reserve(dom.feature_cards.size());
        const double nc = static_cast<double>(counts.n_c[static_cast<std::size_t>(c)]);
        for (std::size_t i = 0; i < dom.feature_cards.size(); ++i) {
            const double denom = nc + alpha * dom.feature_cards[i];
            std::vector<double> probs(static_cast<std::size_t>(dom.feature_cards[i]));
            for (std::size_t v = 0; v < probs.size(); ++v)
                probs[v] = (static_cast<double>(counts.n_cf[static_cast<std::size_t>(c)][i][v]) + alpha) / denom;
            per_feature.emplace_back(std::move(probs));
        }
        conds.push_back(std::move(per_feature));
    }
    return NbcModel{dom, MassFunction(std::move(marg)), std::move(conds), alpha};
}

double joint_prob(const NbcModel& model, int c, std::span<const int> f) {
    model.domain.check_feature_vector(f);
    if (c < 0 || c >= model.domain.num_classes)
        throw std::invalid_argument("joint_prob: class index out of range");
    double p = model.class_prob(c);
    for (std::size_t i = 0; i < f.size(); ++i)
        p *= model.cond_prob(c, static_cast<int>(i), f[i]);
    return p;
}

namespace {

Prediction argmax_classes(std::span<const double> joints) {
    Prediction pred;
    const double max = *std::max_element(joints.begin(), joints.end());
    if (max <= 0.0) {
        pred.predicted_class = 0;
        pred.argmax_set.resize(joints.size());
        std::iota(pred.argmax_set.begin(), pred.argmax_set.end(), 0);
        return pred;
    }
    for (std::size_t c = 0; c < joints.size(); ++c)
        if (max - joints[c] <= kTieRelTol * max) pred.argmax_set.push_back(static_cast<int>(c));
    pred.predicted_class = pred.argmax_set.front();
    return pred;
}

} // namespace

Prediction predict(const NbcModel& model, std::span<const int> f) {
    std::vector<double> joints(static_cast<std::size_t>(model.domain.num_classes));
    for (int c = 0; c < model.domain.num_classes; ++c)
        joints[static_cast<std::size_t>(c)] = joint_prob(model, c, f);
    return argmax_classes(joints);
}

MassFunction posterior(const NbcModel& model, std::span<const int> f) {
    std::vector<double> joints(static_cast<std::size_t>(model.domain.num_classes));
    double marginal = 0.0;
    for (int c = 0; c < model.domain.num_classes; ++c) {
        joints[static_cast<std::size_t>(c)] = joint_prob(model, c, f);
        marginal += joints[static_cast<std::size_t>(c)];
    }
    if (marginal <= 0.0)
        throw std::invalid_argument("posterior: zero feature marginal");
    for (double& p : joints) p /= marginal;
    return MassFunction(std::move(joints));
}

AlphaSelection select_alpha(const Dataset& dataset, std::span<const double> grid,
                            int folds, std::uint64_t seed) {
    if (grid.empty())
        throw std::invalid_argument("select_alpha: empty alpha grid");
    for (double a : grid)
        if (!(a > 0.0))
            throw std::invalid_argument("select_alpha: grid values must be positive");
    if (folds < 2)
        throw std::invalid_argument("select_alpha: need at least 2 folds");
    const std::size_t n = dataset.instances.size();
    if (n < static_cast<std::size_t>(folds))
        throw std::invalid_argument("select_alpha: dataset smaller than fold count");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    SplitMix64 rng(seed);
    rng.shuffle(order);

    // Contiguous folds over the shuffled order; the first n % folds folds get
    // one extra instance.
    std::vector<std::pair<std::size_t, std::size_t>> fold_ranges;
    const std::size_t base = n / static_cast<std::size_t>(folds);
    const std::size_t extra = n % static_cast<std::size_t>(folds);
    std::size_t start = 0;
    for (int k = 0; k < folds; ++k) {
        const std::size_t size = base + (static_cast<std::size_t>(k) < extra ? 1 : 0);
        fold_ranges.emplace_back(start, start + size);
        start += size;
    }

    AlphaSelection sel;
    sel.cv_accuracy.resize(grid.size());
    double best_acc = -1.0;
    for (std::size_t g = 0; g < grid.size(); ++g) {
        double acc_sum = 0.0;
        for (const auto& [lo, hi] : fold_ranges) {
            Dataset train_part;
            train_part.domain = dataset.domain;
            for (std::size_t k = 0; k < n; ++k)
                if (k < lo || k >= hi) train_part.instances.push_back(dataset.instances[order[k]]);
            const NbcModel model = fit(train_part, grid[g]);
            std::size_t correct = 0;
            for (std::size_t k = lo; k < hi; ++k) {
                const LabeledInstance& inst = dataset.instances[order[k]];
                if (predict(model, inst.feature_values).predicted_class == inst.class_index) ++correct;
            }
            acc_sum += static_cast<double>(correct) / static_cast<double>(hi - lo);
        }
        sel.cv_accuracy[g] = acc_sum / folds;
        if (sel.cv_accuracy[g] > best_acc ||
            (sel.cv_accuracy[g] == best_acc && grid[g] < sel.alpha)) {
            best_acc = sel.cv_accuracy[g];
            sel.alpha = grid[g];
        }
    }
    return sel;
}

std::vector<double> default_alpha_grid() {
    return {0.01, 0.05, 0.1, 0.25, 0.5, 1.0, 2.0, 5.0, 10.0};
}

JointMassFunction to_joint(const NbcModel& model) {
    const DomainSpec& dom = model.domain;
    std::vector<double> probs;
    probs.reserve(dom.joint_size());
    // Per class, expand the outer product one feature at a time. The factor
    // order (marginal, then features in declaration order) matches
    // joint_prob, so corresponding cells are bit-equal.
    std::vector<double> acc, next;
    for (int c = 0; c < dom.num_classes; ++c) {
        acc.assign(1, model.class_prob(c));
        for (int i = 0; i < dom.num_features(); ++i) {
            const MassFunction& cond =
                model.conditionals[static_cast<std::size_t>(c)][static_cast<std::size_t>(i)];
            next.resize(acc.size() * cond.size());
            std::size_t idx = 0;
            for (double a : acc)
                for (std::size_t v = 0; v < cond.size(); ++v) next[idx++] = a * cond[v];
            acc.swap(next);
        }
        probs.insert(probs.end(), acc.begin(), acc.end());
    }
    return JointMassFunction(dom, std::move(probs), 1e-10);
}

namespace {

void write_mass(std::ostream& out, const char* key, const MassFunction& m) {
    out << key;
    for (std::size_t i = 0; i < m.size(); ++i) out << ' ' << format_double(m[i]);
    out << '\n';
}

} // namespace

void write_model(const NbcModel& model, std::ostream& out) {
    out << "robnbc-model v1\n";
    out << "num_classes " << model.domain.num_classes << '\n';
    out << "feature_cards";
    for (int card : model.domain.feature_cards) out << ' ' << card;
    out << '\n';
    out << "alpha " << format_double(model.alpha) << '\n';
    write_mass(out, "class_marginal", model.class_marginal);
    for (int c = 0; c < model.domain.num_classes; ++c)
        for (int i = 0; i < model.domain.num_features(); ++i) {
            std::ostringstream key;
            key << "conditional c=" << c << " f=" << i;
            write_mass(out, key.str().c_str(),
                       model.conditionals[static_cast<std::size_t>(c)][static_cast<std::size_t>(i)]);
        }
}

void write_model(const NbcModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open for writing", path);
    write_model(model, out);
    if (!out) throw io_error("write failed", path);
}

namespace {

std::vector<std::string_view> expect_line(std::istream& in, std::string& buf, long& line_no) {
    if (!std::getline(in, buf)) throw parse_error("unexpected end of model file", line_no);
    ++line_no;
    return split(strip(buf), ' ');
}

std::vector<double> parse_mass_tail(std::span<const std::string_view> cells, long line_no) {
    std::vector<double> probs;
    probs.reserve(cells.size());
    for (auto cell : cells) probs.push_back(parse_double(cell, line_no));
    return probs;
}

} // namespace

NbcModel read_model(std::istream& in) {
    std::string buf;
    long line_no = 0;

    auto cells = expect_line(in, buf, line_no);
    if (cells.size() != 2 || cells[0] != "robnbc-model" || cells[1] != "v1")
        throw parse_error("expected header 'robnbc-model v1'", line_no);

    cells = expect_line(in, buf, line_no);
    if (cells.size() != 2 || cells[0] != "num_classes")
        throw parse_error("expected 'num_classes <K>'", line_no);
    const int num_classes = static_cast<int>(parse_long(cells[1], line_no));

    cells = expect_line(in, buf, line_no);
    if (cells.size() < 2 || cells[0] != "feature_cards")
        throw parse_error("expected 'feature_cards <c1> ...'", line_no);
    std::vector<int> cards;
    for (std::size_t i = 1; i < cells.size(); ++i)
        cards.push_back(static_cast<int>(parse_long(cells[i], line_no)));
    DomainSpec dom(num_classes, std::move(cards));

    cells = expect_line(in, buf, line_no);
    if (cells.size() != 2 || cells[0] != "alpha")
        throw parse_error("expected 'alpha <a>'", line_no);
    const double alpha = parse_double(cells[1], line_no);

    cells = expect_line(in, buf, line_no);
    if (cells.size() != static_cast<std::size_t>(num_classes) + 1 || cells[0] != "class_marginal")
        throw parse_error("expected 'class_marginal' with one entry per class", line_no);
    MassFunction marg(parse_mass_tail(std::span(cells).subspan(1), line_no));

    std::vector<std::vector<MassFunction>> conds;
    for (int c = 0; c < num_classes; ++c) {
        std::vector<MassFunction> per_feature;
        for (int i = 0; i < dom.num_features(); ++i) {
            cells = expect_line(in, buf, line_no);
            std::ostringstream want_c, want_f;
            want_c << "c=" << c;
            want_f << "f=" << i;
            if (cells.size() != static_cast<std::size_t>(dom.feature_cards[static_cast<std::size_t>(i)]) + 3 ||
                cells[0] != "conditional" || cells[1] != want_c.str() || cells[2] != want_f.str())
                throw parse_error("expected 'conditional " + want_c.str() + " " + want_f.str() + " ...'", line_no);
            per_feature.emplace_back(parse_mass_tail(std::span(cells).subspan(3), line_no));
        }
        conds.push_back(std::move(per_feature));
    }
    return NbcModel{std::move(dom), std::move(marg), std::move(conds), alpha};
}

NbcModel read_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open", path);
    return read_model(in);
}

} // namespace robnbc
