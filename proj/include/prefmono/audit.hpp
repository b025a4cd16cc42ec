#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "prefmono/solver.hpp"
#include "prefmono/spectral.hpp"

namespace prefmono {

enum class PerturbationMode { unequivocal, intensification };

inline const char* to_string(PerturbationMode m) {
    return m == PerturbationMode::unequivocal ? "unequivocal" : "intensification";
}

/// Tolerance separating genuine monotonicity violations from solver noise.
constexpr double kViolationTolerance = 1e-9;

/// First-order prediction of the score-difference response to a dataset
/// perturbation: delta = eps * rate_beta + o(eps), with
/// rate_beta = alpha * grad_s^T H^-1 grad_s.
struct AuditPrediction {
    double alpha = 0.0;      // loss sensitivity (mode-dependent)
    double rate_beta = 0.0;  // first-order slope
    Vector gradient_s;       // grad_theta s_{yz|x} at theta*
    PerturbationMode mode = PerturbationMode::unequivocal;
    int occurrences = 0;        // matching data (intensification; both orientations)
    int active_occurrences = 0;  // those whose push is not saturated by projection
    bool triple_gradient_nonzero = false;   // grad s_{yz|x}(theta*) != 0 for the audited triple
    bool dataset_gradients_nonzero = true;  // same hypothesis over every datum in D
};

struct FlavorVerdicts {
    VerdictKind pairwise = VerdictKind::not_applicable;
    VerdictKind fully_pairwise = VerdictKind::not_applicable;
    VerdictKind individual_score_y = VerdictKind::not_applicable;
    VerdictKind individual_score_z = VerdictKind::not_applicable;
    VerdictKind individual_probability = VerdictKind::not_applicable;
};

struct AuditReport {
    std::string scenario;
    PerturbationMode mode = PerturbationMode::unequivocal;
    double epsilon = 0.0;
    Vector theta_star;
    Vector theta_eps;
    double alpha = 0.0;
    double rate_beta = 0.0;
    double predicted_delta = 0.0;  // eps * rate_beta
    double realized_delta = 0.0;   // s_yz(theta_eps) - s_yz(theta_star)
    double relative_residual = 0.0;
    FlavorVerdicts verdicts;
    AssumptionVerdict assumption;
    bool inconclusive = false;  // perturbed solve did not converge
    bool basin_ok = true;       // ||theta_eps - theta*|| within the local-basin bound
};

namespace detail {

inline Vector solve_spd(const Matrix& h, const Vector& rhs) {
    Eigen::LLT<Matrix> llt(h);
    if (llt.info() == Eigen::Success) return llt.solve(rhs);
    Eigen::LDLT<Matrix> ldlt(h);
    return ldlt.solve(rhs);
}

/// Prediction machinery without hypothesis enforcement; audits use it to
/// report alpha/beta even on scenarios engineered to break the assumptions.
inline AuditPrediction predict_unchecked(const Problem& p, const Vector& theta_star,
                                         const std::string& x, const std::string& y,
                                         const std::string& z, PerturbationMode mode) {
    AuditPrediction pred;
    pred.mode = mode;
    pred.gradient_s = p.model.score_difference_gradient(theta_star, x, y, z);
    pred.triple_gradient_nonzero = pred.gradient_s.lpNorm<Eigen::Infinity>() > 1e-14;
    for (const Comparison& d : p.dataset.comparisons()) {
        Vector g = p.model.score_difference_gradient(theta_star, d.x, d.y, d.z);
        if (g.lpNorm<Eigen::Infinity>() <= 1e-14) pred.dataset_gradients_nonzero = false;
    }

    double s_star = p.model.score_difference(theta_star, x, y, z);
    if (mode == PerturbationMode::unequivocal) {
        pred.alpha = -p.family.dds(s_star, p.family.domain().max_value());
    } else {
        // Sum the per-occurrence sensitivities over both orientations of the
        // triple; a push saturated by the projection contributes nothing.
        const ComparisonDomain& dom = p.family.domain();
        for (const Comparison& d : p.dataset.comparisons()) {
            bool forward = d.x == x && d.y == y && d.z == z;
            bool reversed = d.x == x && d.y == z && d.z == y;
            if (!forward && !reversed) continue;
            ++pred.occurrences;
            if (dom.has_max()) {
                if (forward && d.c >= dom.max_value()) continue;
                if (reversed && d.c <= dom.min_value()) continue;
            }
            ++pred.active_occurrences;
            double s_d = forward ? s_star : -s_star;
            pred.alpha += d.weight * (-p.family.dcds_cross(s_d, d.c));
        }
    }

    if (pred.triple_gradient_nonzero && pred.alpha != 0.0) {
        Matrix h = hessian(p, theta_star);
        Vector u = solve_spd(h, pred.gradient_s);
        pred.rate_beta = pred.alpha * pred.gradient_s.dot(u);
    }
    return pred;
}

inline void require(bool cond, const std::string& hypothesis) {
    if (!cond) throw PreconditionError("audit hypothesis failed: " + hypothesis);
}

}  // namespace detail

/// First-order prediction under the hypotheses that make it valid; throws a
/// PreconditionError naming any failed hypothesis.
inline AuditPrediction predict_local_delta(const Problem& p, const Vector& theta_star,
                                           const std::string& x, const std::string& y,
                                           const std::string& z, PerturbationMode mode) {
    MinimumCertificate cert = certify_minimum(p, theta_star);
    detail::require(cert.grad_norm <= 1e-8, "grad Loss(theta*) = 0 (stationarity)");
    detail::require(cert.min_eigenvalue >= 1e-10, "Hessian positive definite at theta*");
    if (mode == PerturbationMode::unequivocal) {
        detail::require(p.family.domain().has_max(), "comparison set has a maximum");
        detail::require(p.family.check_assumption_max().holds(),
                        "d_s loss(s, max C) < 0 for all s (unequivocal-comparison assumption)");
    } else {
        detail::require(p.family.domain().kind() != ComparisonDomain::Kind::discrete,
                        "comparison set is an interval");
        detail::require(p.family.check_assumption_cross().holds(),
                        "d_c d_s loss < 0 (intensification assumption)");
        detail::require(p.dataset.count_triple(x, y, z) + p.dataset.count_triple(x, z, y) > 0,
                        "triple (x, y, z) appears in the dataset");
    }
    return detail::predict_unchecked(p, theta_star, x, y, z, mode);
}

inline Dataset perturb_dataset(const Problem& p, const std::string& x, const std::string& y,
                               const std::string& z, PerturbationMode mode, double eps) {
    return mode == PerturbationMode::unequivocal ? p.dataset.add_unequivocal(x, y, z, eps)
                                                 : p.dataset.intensify(x, y, z, eps);
}

/// Re-minimizes from theta* on the perturbed dataset and compares the
/// realized score-difference delta against the first-order prediction.
inline AuditReport audit_local_pairwise(const Problem& p, const std::string& x,
                                        const std::string& y, const std::string& z,
                                        PerturbationMode mode, double eps,
                                        const SolveSettings& settings = {}) {
    if (eps < 0.0) throw InputError("audit requires eps >= 0");
    AuditReport rep;
    rep.mode = mode;
    rep.epsilon = eps;

    SolveResult base = minimize(p, p.reg.is_none() ? Vector::Zero(p.model.dim()) : p.reg.center(),
                                settings);
    rep.theta_star = base.theta;
    if (!base.converged) {
        rep.inconclusive = true;
        return rep;
    }

    rep.assumption = mode == PerturbationMode::unequivocal ? p.family.check_assumption_max()
                                                           : p.family.check_assumption_cross();
    AuditPrediction pred = detail::predict_unchecked(p, rep.theta_star, x, y, z, mode);
    rep.alpha = pred.alpha;
    rep.rate_beta = pred.rate_beta;
    rep.predicted_delta = eps * pred.rate_beta;

    Problem perturbed = p.with_dataset(perturb_dataset(p, x, y, z, mode, eps));
    SolveResult res = minimize(perturbed, rep.theta_star, settings);
    rep.theta_eps = res.theta;
    if (!res.converged) {
        rep.inconclusive = true;
        return rep;
    }

    double before = p.model.score_difference(rep.theta_star, x, y, z);
    double after = p.model.score_difference(rep.theta_eps, x, y, z);
    rep.realized_delta = after - before;
    rep.relative_residual = rep.predicted_delta != 0.0
                                ? std::abs(rep.realized_delta - rep.predicted_delta) /
                                      std::abs(rep.predicted_delta)
                                : std::abs(rep.realized_delta);
    rep.verdicts.pairwise = rep.realized_delta >= -kViolationTolerance ? VerdictKind::holds
                                                                       : VerdictKind::violated;

    if (eps > 0.0 && pred.triple_gradient_nonzero && pred.alpha > 0.0) {
        Matrix h = hessian(p, rep.theta_star);
        double c_basin = 10.0 * pred.alpha * detail::solve_spd(h, pred.gradient_s).norm();
        rep.basin_ok = (rep.theta_eps - rep.theta_star).norm() <= std::max(c_basin * eps, 1e-8);
    }
    return rep;
}

/// One rung of a cumulative perturbation ladder.
struct LadderRung {
    double epsilon = 0.0;
    double score_difference = 0.0;
};

struct LadderReport {
    VerdictKind verdict = VerdictKind::not_applicable;
    std::string reason;
    std::vector<LadderRung> rungs;
    bool nondecreasing = false;
};

/// Global-monotonicity ladder: re-solves at each cumulative perturbation
/// level and checks the score-difference sequence is nondecreasing. Requires
/// the strong-convexity surrogate (l2 regularizer, convex loss meeting the
/// relevant assumption, zero-score-Hessian model).
inline LadderReport audit_global_ladder(const Problem& p, const std::string& x,
                                        const std::string& y, const std::string& z,
                                        PerturbationMode mode,
                                        const std::vector<double>& eps_ladder,
                                        const SolveSettings& settings = {}) {
    LadderReport rep;
    const AssumptionVerdict assumption = mode == PerturbationMode::unequivocal
                                             ? p.family.check_assumption_max()
                                             : p.family.check_assumption_cross();
    if (p.reg.is_none()) {
        rep.reason = "no strongly convex regularizer";
        return rep;
    }
    if (!p.model.zero_score_hessian()) {
        rep.reason = "score model is not linear in theta";
        return rep;
    }
    if (!p.family.convex_in_s() || !assumption.holds()) {
        rep.reason = "loss family does not meet the global-monotonicity assumptions";
        return rep;
    }
    for (std::size_t i = 0; i + 1 < eps_ladder.size(); ++i)
        if (eps_ladder[i] > eps_ladder[i + 1])
            throw InputError("ladder must be nondecreasing in eps");

    Vector theta = p.reg.center();
    SolveResult base = minimize(p, theta, settings);
    if (!base.converged) {
        rep.reason = "base solve did not converge";
        return rep;
    }
    theta = base.theta;
    rep.rungs.push_back({0.0, p.model.score_difference(theta, x, y, z)});
    for (double eps : eps_ladder) {
        Problem rung_problem = p.with_dataset(perturb_dataset(p, x, y, z, mode, eps));
        SolveResult res = minimize(rung_problem, theta, settings);  // warm start
        if (!res.converged) {
            rep.reason = "rung solve did not converge";
            return rep;
        }
        theta = res.theta;
        rep.rungs.push_back({eps, p.model.score_difference(theta, x, y, z)});
    }
    rep.nondecreasing = true;
    for (std::size_t i = 0; i + 1 < rep.rungs.size(); ++i)
        if (rep.rungs[i + 1].score_difference <
            rep.rungs[i].score_difference - kViolationTolerance)
            rep.nondecreasing = false;
    rep.verdict = rep.nondecreasing ? VerdictKind::holds : VerdictKind::violated;
    return rep;
}

struct IndividualScoreReport {
    VerdictKind score_y = VerdictKind::not_applicable;
    VerdictKind score_z = VerdictKind::not_applicable;
    DominanceVerdict dominance;   // of G = grad s_{|x}^T H^-1 grad s_{|x}
    Matrix g;                     // the audited matrix, |A| x |A|
    double delta_y = 0.0;
    double delta_z = 0.0;
    bool dominance_predicts_monotonicity = false;
    bool outcome_consistent_with_dominance = false;  // dominance holds => both inequalities hold
    bool inconclusive = false;
    std::string reason;
};

/// Individual-score monotonicity: forms the Gram-type matrix of
/// score gradients through the inverse Hessian, tests max-diagonal
/// dominance, and verifies both realized inequalities after intensification.
inline IndividualScoreReport audit_individual_score(const Problem& p, const std::string& x,
                                                    const std::string& y, const std::string& z,
                                                    double eps,
                                                    const SolveSettings& settings = {}) {
    IndividualScoreReport rep;
    const auto& alts = p.model.space().alternatives();
    if (alts.size() < 2) {
        rep.reason = "background has fewer than two alternatives";
        return rep;
    }
    SolveResult base = minimize(p, p.reg.is_none() ? Vector::Zero(p.model.dim()) : p.reg.center(),
                                settings);
    if (!base.converged) {
        rep.inconclusive = true;
        return rep;
    }
    const Vector& theta_star = base.theta;

    Matrix f(p.model.dim(), alts.size());
    for (std::size_t i = 0; i < alts.size(); ++i)
        f.col(static_cast<int>(i)) = p.model.score_gradient(theta_star, x, alts[i]);
    Matrix h = hessian(p, theta_star);
    Eigen::LLT<Matrix> llt(h);
    Matrix hinv_f = llt.info() == Eigen::Success ? Matrix(llt.solve(f))
                                                 : Matrix(Eigen::LDLT<Matrix>(h).solve(f));
    rep.g = f.transpose() * hinv_f;
    rep.g = ((rep.g + rep.g.transpose()) / 2.0).eval();  // symmetrize solver noise
    rep.dominance = is_max_diag_dominant(rep.g);
    rep.dominance_predicts_monotonicity = rep.dominance.ok;

    Problem perturbed = p.with_dataset(p.dataset.intensify(x, y, z, eps));
    SolveResult res = minimize(perturbed, theta_star, settings);
    if (!res.converged) {
        rep.inconclusive = true;
        return rep;
    }
    rep.delta_y = p.model.score(res.theta, x, y) - p.model.score(theta_star, x, y);
    rep.delta_z = p.model.score(res.theta, x, z) - p.model.score(theta_star, x, z);
    rep.score_y = rep.delta_y >= -kViolationTolerance ? VerdictKind::holds
                                                      : VerdictKind::violated;
    rep.score_z = rep.delta_z <= kViolationTolerance ? VerdictKind::holds
                                                     : VerdictKind::violated;
    rep.outcome_consistent_with_dominance =
        !rep.dominance.ok || (rep.score_y == VerdictKind::holds &&
                              rep.score_z == VerdictKind::holds);
    return rep;
}

struct FullyPairwiseReport {
    VerdictKind fully_pairwise = VerdictKind::not_applicable;    // y side: s_yw up for all w != y
    VerdictKind fully_pairwise_z = VerdictKind::not_applicable;  // z side: s_zw down for all w != z
    VerdictKind individual_probability = VerdictKind::not_applicable;
    std::vector<double> deltas_yw;  // ordered by alternative index, w != y
    double delta_prob_y = 0.0;
    double delta_prob_z = 0.0;
    bool implication_ok = true;  // fully-pairwise => probability, never falsified
    bool inconclusive = false;
};

/// Fully-pairwise and individual-probability monotonicity: checks every
/// score difference s_yw (and the decrease side for z), the probability
/// movements, and the softmax implication between them.
inline FullyPairwiseReport audit_fully_pairwise_and_probability(
    const Problem& p, const std::string& x, const std::string& y, const std::string& z,
    PerturbationMode mode, double eps, const SolveSettings& settings = {}) {
    FullyPairwiseReport rep;
    if (!p.model.has_probabilities())
        throw PreconditionError("probability audit requires a logit-backed score model");
    SolveResult base = minimize(p, p.reg.is_none() ? Vector::Zero(p.model.dim()) : p.reg.center(),
                                settings);
    if (!base.converged) {
        rep.inconclusive = true;
        return rep;
    }
    Problem perturbed = p.with_dataset(perturb_dataset(p, x, y, z, mode, eps));
    SolveResult res = minimize(perturbed, base.theta, settings);
    if (!res.converged) {
        rep.inconclusive = true;
        return rep;
    }

    bool y_side = true, z_side = true;
    for (const std::string& w : p.model.space().alternatives()) {
        if (w != y) {
            double d = p.model.score_difference(res.theta, x, y, w) -
                       p.model.score_difference(base.theta, x, y, w);
            rep.deltas_yw.push_back(d);
            if (d < -kViolationTolerance) y_side = false;
        }
        if (w != z) {
            double d = p.model.score_difference(res.theta, x, z, w) -
                       p.model.score_difference(base.theta, x, z, w);
            if (d > kViolationTolerance) z_side = false;
        }
    }
    rep.fully_pairwise = y_side ? VerdictKind::holds : VerdictKind::violated;
    rep.fully_pairwise_z = z_side ? VerdictKind::holds : VerdictKind::violated;

    rep.delta_prob_y = p.model.probability(res.theta, x, y) -
                       p.model.probability(base.theta, x, y);
    rep.delta_prob_z = p.model.probability(res.theta, x, z) -
                       p.model.probability(base.theta, x, z);
    bool prob_y = rep.delta_prob_y >= -kViolationTolerance;
    bool prob_z = rep.delta_prob_z <= kViolationTolerance;
    rep.individual_probability = prob_y && prob_z ? VerdictKind::holds : VerdictKind::violated;
    rep.implication_ok = (!y_side || prob_y) && (!z_side || prob_z);
    return rep;
}

/// Gradient-step predicates and the realized effects of one explicit gradient
/// step on l(s_yz, max C). Also carries the predicted per-unit rates from
/// the continuous-time analysis for finite-difference verification.
struct GradientStepReport {
    double alpha = 0.0;
    bool predicate_pairwise = false;    // grad s_yz != 0
    bool predicate_individual = false;  // grad s_yz . grad s_y > 0
    bool predicate_fully = false;       // grad s_yw . grad s_yz > 0 for all w (and pairwise)
    double rate_pairwise = 0.0;         // alpha ||grad s_yz||^2
    double rate_individual_y = 0.0;     // alpha (||grad s_y||^2 - grad s_y . grad s_z)
    std::vector<double> rates_yw;       // alpha grad s_yw . grad s_yz, w != y
    double realized_pairwise = 0.0;
    double realized_individual_y = 0.0;
    std::vector<double> realized_yw;
    double realized_prob_y = 0.0;
    bool has_probabilities = false;
    VerdictKind pairwise = VerdictKind::not_applicable;
    VerdictKind individual_score_y = VerdictKind::not_applicable;
    VerdictKind fully_pairwise = VerdictKind::not_applicable;
    VerdictKind individual_probability = VerdictKind::not_applicable;
    Vector theta_eps;
};

inline GradientStepReport audit_gradient_descent(const Problem& p, const Vector& theta,
                                                 const std::string& x, const std::string& y,
                                                 const std::string& z, double eps_step) {
    if (!p.reg.is_none())
        throw PreconditionError("gradient-descent audit requires nil regularization");
    if (!p.family.domain().has_max())
        throw PreconditionError("gradient-descent audit requires a maximal comparison");
    if (!(eps_step >= 0.0)) throw InputError("step size must be nonnegative");

    GradientStepReport rep;
    double cmax = p.family.domain().max_value();
    double s_yz = p.model.score_difference(theta, x, y, z);
    rep.alpha = -p.family.dds(s_yz, cmax);  // throws at a slic kink

    Vector g_yz = p.model.score_difference_gradient(theta, x, y, z);
    Vector g_y = p.model.score_gradient(theta, x, y);
    Vector g_z = p.model.score_gradient(theta, x, z);
    rep.predicate_pairwise = g_yz.lpNorm<Eigen::Infinity>() > 1e-14;
    rep.predicate_individual = g_yz.dot(g_y) > 0.0;
    rep.rate_pairwise = rep.alpha * g_yz.squaredNorm();
    rep.rate_individual_y = rep.alpha * (g_y.squaredNorm() - g_y.dot(g_z));

    rep.predicate_fully = rep.predicate_pairwise;
    const auto& alts = p.model.space().alternatives();
    for (const std::string& w : alts) {
        if (w == y) continue;
        Vector g_yw = p.model.score_difference_gradient(theta, x, y, w);
        rep.rates_yw.push_back(rep.alpha * g_yw.dot(g_yz));
        if (w != z && !(g_yw.dot(g_yz) > 0.0)) rep.predicate_fully = false;
    }

    // theta - eps * grad[l(s_yz, max C)] = theta + eps * alpha * grad s_yz
    rep.theta_eps = theta + (eps_step * rep.alpha) * g_yz;

    rep.realized_pairwise = p.model.score_difference(rep.theta_eps, x, y, z) - s_yz;
    rep.realized_individual_y = p.model.score(rep.theta_eps, x, y) - p.model.score(theta, x, y);
    bool fully_ok = true;
    for (const std::string& w : alts) {
        if (w == y) continue;
        double d = p.model.score_difference(rep.theta_eps, x, y, w) -
                   p.model.score_difference(theta, x, y, w);
        rep.realized_yw.push_back(d);
        if (d < -1e-12) fully_ok = false;
    }
    rep.pairwise = rep.realized_pairwise >= -1e-12 ? VerdictKind::holds : VerdictKind::violated;
    rep.individual_score_y = rep.realized_individual_y >= -1e-12 ? VerdictKind::holds
                                                                 : VerdictKind::violated;
    rep.fully_pairwise = fully_ok ? VerdictKind::holds : VerdictKind::violated;

    rep.has_probabilities = p.model.has_probabilities();
    if (rep.has_probabilities) {
        rep.realized_prob_y = p.model.probability(rep.theta_eps, x, y) -
                              p.model.probability(theta, x, y);
        rep.individual_probability = rep.realized_prob_y >= -1e-12 ? VerdictKind::holds
                                                                   : VerdictKind::violated;
    }
    return rep;
}

}  // namespace prefmono
