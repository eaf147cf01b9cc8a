#include "robnbc/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace robnbc {

namespace {

constexpr std::size_t kMaxGlobalVertices = 100'000;
constexpr std::size_t kMaxLocalVertices = 1'000'000;

// Contaminated entry values shared by the vertex builders and the credal
// reduction, so both routes produce bit-equal numbers.
double shrunk(double p, double epsilon) { return (1.0 - epsilon) * p; }
double boosted(double p, double epsilon) { return (1.0 - epsilon) * p + epsilon; }

void check_epsilon(double epsilon) {
    if (!(epsilon >= 0.0 && epsilon < 1.0))
        throw std::invalid_argument("epsilon must lie in [0, 1)");
}

std::vector<double> class_joints(const NbcModel& model, std::span<const int> f) {
    std::vector<double> joints(static_cast<std::size_t>(model.domain.num_classes));
    for (int c = 0; c < model.domain.num_classes; ++c)
        joints[static_cast<std::size_t>(c)] = joint_prob(model, c, f);
    return joints;
}

RobustnessValue closed_form_global(std::span<const double> joints, std::span<const int> argmax_set) {
    RobustnessValue rv;
    rv.kind = PerturbationKind::global;
    if (argmax_set.size() != 1 || joints[static_cast<std::size_t>(argmax_set.front())] <= 0.0)
        return rv;
    const int chat = argmax_set.front();
    double runner_up = 0.0;
    for (std::size_t c = 0; c < joints.size(); ++c)
        if (static_cast<int>(c) != chat) runner_up = std::max(runner_up, joints[c]);
    const double gap = joints[static_cast<std::size_t>(chat)] - runner_up;
    rv.epsilon = gap / (1.0 + gap);
    rv.bracket_lo = rv.bracket_hi = rv.epsilon;
    return rv;
}

Prediction argmax_of(std::span<const double> joints) {
    Prediction pred;
    const double max = *std::max_element(joints.begin(), joints.end());
    if (max <= 0.0) {
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

bool is_robust_finite(std::span<const JointMassFunction> candidates,
                      std::span<const int> f, int predicted) {
    if (candidates.empty())
        throw std::invalid_argument("is_robust_finite: empty candidate list");
    const DomainSpec& dom = candidates.front().domain();
    for (const JointMassFunction& cand : candidates)
        if (cand.domain() != dom)
            throw std::invalid_argument("is_robust_finite: candidates over different domains");
    dom.check_feature_vector(f);
    if (predicted < 0 || predicted >= dom.num_classes)
        throw std::invalid_argument("is_robust_finite: predicted class out of range");

    const std::size_t nf = dom.num_feature_vectors();
    const std::size_t f_flat = dom.feature_flat_index(f);
    const std::size_t predicted_idx = static_cast<std::size_t>(predicted) * nf + f_flat;

    for (const JointMassFunction& cand : candidates)
        if (!(cand[predicted_idx] > 0.0)) return false;
    for (const JointMassFunction& cand : candidates) {
        const double denom = cand[predicted_idx];
        for (int c = 0; c < dom.num_classes; ++c) {
            if (c == predicted) continue;
            if (!(cand[static_cast<std::size_t>(c) * nf + f_flat] / denom < 1.0)) return false;
        }
    }
    return true;
}

RobustnessValue global_robustness(const JointMassFunction& joint, std::span<const int> f) {
    const DomainSpec& dom = joint.domain();
    std::vector<double> joints(static_cast<std::size_t>(dom.num_classes));
    for (int c = 0; c < dom.num_classes; ++c) joints[static_cast<std::size_t>(c)] = joint.at(c, f);
    const Prediction pred = argmax_of(joints);
    return closed_form_global(joints, pred.argmax_set);
}

RobustnessValue global_robustness(const NbcModel& model, std::span<const int> f) {
    const std::vector<double> joints = class_joints(model, f);
    const Prediction pred = argmax_of(joints);
    return closed_form_global(joints, pred.argmax_set);
}

double local_phi(const NbcModel& model, std::span<const int> f, int c, double epsilon) {
    check_epsilon(epsilon);
    model.domain.check_feature_vector(f);
    const double t = epsilon / (1.0 - epsilon);
    double value = model.class_prob(c) + t;
    for (std::size_t i = 0; i < f.size(); ++i)
        value *= model.cond_prob(c, static_cast<int>(i), f[i]) + t;
    return value;
}

double local_phi_max(const NbcModel& model, std::span<const int> f, int predicted, double epsilon) {
    double max = -1.0;
    for (int c = 0; c < model.domain.num_classes; ++c) {
        if (c == predicted) continue;
        max = std::max(max, local_phi(model, f, c, epsilon));
    }
    return max;
}

RobustnessValue local_robustness(const NbcModel& model, std::span<const int> f, double tol) {
    if (!(tol > 0.0))
        throw std::invalid_argument("local_robustness: tolerance must be positive");
    RobustnessValue rv;
    rv.kind = PerturbationKind::local;

    const Prediction pred = predict(model, f);
    const double target = joint_prob(model, pred.predicted_class, f);
    if (pred.tied() || target <= 0.0) return rv;

    double lo = 0.0, hi = 0.5;
    int iterations = 0;
    while (hi - lo >= tol) {
        if (++iterations > 200)
            throw std::runtime_error("local_robustness: bisection did not converge");
        const double mid = 0.5 * (lo + hi);
        const double value = local_phi_max(model, f, pred.predicted_class, mid);
        if (std::isnan(value))
            throw std::runtime_error("local_robustness: phi evaluated to NaN");
        if (value < target)
            lo = mid;
        else
            hi = mid;
    }
    rv.epsilon = 0.5 * (lo + hi);
    rv.bracket_lo = lo;
    rv.bracket_hi = hi;
    return rv;
}

PerturbationVertexSet contamination_vertices_global(const JointMassFunction& p, double epsilon) {
    check_epsilon(epsilon);
    const std::size_t cells = p.size();
    if (cells > kMaxGlobalVertices)
        throw std::invalid_argument("contamination_vertices_global: domain too large");

    PerturbationVertexSet set;
    set.epsilon = epsilon;
    set.kind = PerturbationKind::global;
    set.vertices.reserve(cells);
    std::vector<double> base(cells);
    for (std::size_t i = 0; i < cells; ++i) base[i] = shrunk(p[i], epsilon);
    for (std::size_t x = 0; x < cells; ++x) {
        std::vector<double> table = base;
        table[x] = boosted(p[x], epsilon);
        set.vertices.emplace_back(p.domain(), std::move(table), 1e-10);
    }
    return set;
}

PerturbationVertexSet contamination_vertices_local(const NbcModel& model, double epsilon) {
    check_epsilon(epsilon);
    const DomainSpec& dom = model.domain;

    if (epsilon == 0.0) {
        // P_0 = {p}: every extreme collapses onto the base model.
        PerturbationVertexSet set;
        set.epsilon = 0.0;
        set.kind = PerturbationKind::local;
        set.vertices.push_back(to_joint(model));
        return set;
    }

    // One contamination extreme per outcome of each local mass function: the
    // class marginal plus one conditional per (class, feature).
    std::size_t vertex_count = static_cast<std::size_t>(dom.num_classes);
    for (int c = 0; c < dom.num_classes; ++c)
        for (int card : dom.feature_cards) {
            (void)c;
            if (vertex_count > kMaxLocalVertices / static_cast<std::size_t>(card))
                throw std::invalid_argument("contamination_vertices_local: vertex count exceeds cap");
            vertex_count *= static_cast<std::size_t>(card);
        }

    auto extremes_of = [epsilon](const MassFunction& base) {
        std::vector<MassFunction> out;
        out.reserve(base.size());
        for (std::size_t x = 0; x < base.size(); ++x) {
            std::vector<double> probs(base.size());
            for (std::size_t j = 0; j < base.size(); ++j) probs[j] = shrunk(base[j], epsilon);
            probs[x] = boosted(base[x], epsilon);
            out.emplace_back(std::move(probs));
        }
        return out;
    };

    const std::vector<MassFunction> marginal_extremes = extremes_of(model.class_marginal);
    std::vector<std::vector<std::vector<MassFunction>>> cond_extremes(
        static_cast<std::size_t>(dom.num_classes));
    for (int c = 0; c < dom.num_classes; ++c)
        for (int i = 0; i < dom.num_features(); ++i)
            cond_extremes[static_cast<std::size_t>(c)].push_back(
                extremes_of(model.conditionals[static_cast<std::size_t>(c)][static_cast<std::size_t>(i)]));

    // Mixed-radix enumeration: digit 0 picks the marginal extreme, then one
    // digit per (class, feature) conditional.
    const std::size_t num_locals = 1 + static_cast<std::size_t>(dom.num_classes) *
                                           static_cast<std::size_t>(dom.num_features());
    std::vector<std::size_t> radix(num_locals), digit(num_locals, 0);
    radix[0] = static_cast<std::size_t>(dom.num_classes);
    {
        std::size_t k = 1;
        for (int c = 0; c < dom.num_classes; ++c)
            for (int i = 0; i < dom.num_features(); ++i)
                radix[k++] = static_cast<std::size_t>(dom.feature_cards[static_cast<std::size_t>(i)]);
    }

    PerturbationVertexSet set;
    set.epsilon = epsilon;
    set.kind = PerturbationKind::local;
    set.vertices.reserve(vertex_count);
    NbcModel vertex_model = model;
    while (true) {
        vertex_model.class_marginal = marginal_extremes[digit[0]];
        {
            std::size_t k = 1;
            for (int c = 0; c < dom.num_classes; ++c)
                for (int i = 0; i < dom.num_features(); ++i)
                    vertex_model.conditionals[static_cast<std::size_t>(c)][static_cast<std::size_t>(i)] =
                        cond_extremes[static_cast<std::size_t>(c)][static_cast<std::size_t>(i)][digit[k++]];
        }
        set.vertices.push_back(to_joint(vertex_model));

        std::size_t pos = num_locals;
        while (pos > 0) {
            --pos;
            if (++digit[pos] < radix[pos]) break;
            digit[pos] = 0;
            if (pos == 0) return set;
        }
    }
}

std::vector<int> credal_prediction(const NbcModel& model, std::span<const int> f,
                                   double epsilon, PerturbationKind kind) {
    check_epsilon(epsilon);
    const DomainSpec& dom = model.domain;
    std::vector<int> result;

    if (kind == PerturbationKind::global) {
        const std::vector<double> joints = class_joints(model, f);
        for (int c = 0; c < dom.num_classes; ++c) {
            const double best = boosted(joints[static_cast<std::size_t>(c)], epsilon);
            bool member = true;
            for (int r = 0; r < dom.num_classes && member; ++r) {
                if (r == c) continue;
                if (best < shrunk(joints[static_cast<std::size_t>(r)], epsilon)) member = false;
            }
            if (member) result.push_back(c);
        }
        return result;
    }

    // Local kind: best case boosts every factor of c; each rival's worst
    // case shrinks every one of its own factors. The class marginal extreme
    // that boosts c simultaneously realizes every rival's worst marginal
    // entry, so the two sides are attained by a single vertex.
    auto best_product = [&](int c) {
        double v = boosted(model.class_prob(c), epsilon);
        for (std::size_t i = 0; i < f.size(); ++i)
            v *= boosted(model.cond_prob(c, static_cast<int>(i), f[i]), epsilon);
        return v;
    };
    auto worst_product = [&](int c) {
        double v = shrunk(model.class_prob(c), epsilon);
        for (std::size_t i = 0; i < f.size(); ++i)
            v *= shrunk(model.cond_prob(c, static_cast<int>(i), f[i]), epsilon);
        return v;
    };
    for (int c = 0; c < dom.num_classes; ++c) {
        const double best = best_product(c);
        bool member = true;
        for (int r = 0; r < dom.num_classes && member; ++r) {
            if (r == c) continue;
            if (best < worst_product(r)) member = false;
        }
        if (member) result.push_back(c);
    }
    return result;
}

} // namespace robnbc
