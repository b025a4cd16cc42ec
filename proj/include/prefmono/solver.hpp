#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "prefmono/dataset.hpp"
#include "prefmono/loss.hpp"
#include "prefmono/score_model.hpp"

namespace prefmono {

/// R(theta): nil, or the strongly convex l2 penalty (lambda/2)||theta - c||^2.
class Regularizer {
public:
    static Regularizer none() { return Regularizer(); }

    static Regularizer l2(double lambda, Vector center) {
        if (!(lambda > 0.0)) throw InputError("l2 regularizer: lambda must be positive");
        if (!center.allFinite()) throw InputError("l2 regularizer: nonfinite center");
        Regularizer r;
        r.lambda_ = lambda;
        r.center_ = std::move(center);
        return r;
    }

    static Regularizer l2(double lambda, int dim) { return l2(lambda, Vector::Zero(dim)); }

    bool is_none() const { return lambda_ == 0.0; }
    double lambda() const { return lambda_; }
    const Vector& center() const { return center_; }

    double value(const Vector& theta) const {
        if (is_none()) return 0.0;
        return 0.5 * lambda_ * (theta - center_).squaredNorm();
    }

    Vector gradient(const Vector& theta) const {
        if (is_none()) return Vector::Zero(theta.size());
        return lambda_ * (theta - center_);
    }

    void add_hessian(Matrix& h) const {
        if (!is_none()) h.diagonal().array() += lambda_;
    }

private:
    Regularizer() = default;
    double lambda_ = 0.0;
    Vector center_;
};

/// A full minimization problem: dataset + loss family + score model +
/// regularizer, all held by value (immutable snapshot).
struct Problem {
    Dataset dataset;
    LossFamily family;
    ScoreModel model;
    Regularizer reg;

    Problem(Dataset d, LossFamily f, ScoreModel m, Regularizer r)
        : dataset(std::move(d)), family(std::move(f)), model(std::move(m)), reg(std::move(r)) {
        if (!reg.is_none() && reg.center().size() != model.dim())
            throw InputError("regularizer center length does not match model dimension");
    }

    Problem with_dataset(Dataset d) const { return Problem(std::move(d), family, model, reg); }
};

/// Loss(theta | D) = R(theta) + sum_i w_i * l(s_i, c_i).
inline double loss_of(const Problem& p, const Vector& theta) {
    double acc = p.reg.value(theta);
    for (const Comparison& d : p.dataset.comparisons()) {
        if (d.weight == 0.0) continue;
        double s = p.model.score_difference(theta, d.x, d.y, d.z);
        acc += d.weight * p.family.value(s, d.c);
    }
    return acc;
}

inline Vector gradient(const Problem& p, const Vector& theta) {
    Vector g = p.reg.gradient(theta);
    if (g.size() == 0) g = Vector::Zero(p.model.dim());
    std::size_t idx = 0;
    for (const Comparison& d : p.dataset.comparisons()) {
        ++idx;
        if (d.weight == 0.0) continue;
        double s = p.model.score_difference(theta, d.x, d.y, d.z);
        double dl;
        try {
            dl = p.family.dds(s, d.c);
        } catch (const NondifferentiableError& e) {
            throw NondifferentiableError(std::string(e.what()) + " (comparison #" +
                                         std::to_string(idx) + ": " + d.x + ", " + d.y + ", " +
                                         d.z + ")");
        }
        g += (d.weight * dl) * p.model.score_difference_gradient(theta, d.x, d.y, d.z);
    }
    return g;
}

inline Matrix hessian(const Problem& p, const Vector& theta) {
    Matrix h = Matrix::Zero(p.model.dim(), p.model.dim());
    p.reg.add_hessian(h);
    std::size_t idx = 0;
    for (const Comparison& d : p.dataset.comparisons()) {
        ++idx;
        if (d.weight == 0.0) continue;
        double s = p.model.score_difference(theta, d.x, d.y, d.z);
        double dl, d2l;
        try {
            dl = p.family.dds(s, d.c);
            d2l = p.family.d2ds2(s, d.c);
        } catch (const NondifferentiableError& e) {
            throw NondifferentiableError(std::string(e.what()) + " (comparison #" +
                                         std::to_string(idx) + ": " + d.x + ", " + d.y + ", " +
                                         d.z + ")");
        }
        Vector gs = p.model.score_difference_gradient(theta, d.x, d.y, d.z);
        h += (d.weight * d2l) * (gs * gs.transpose());
        if (!p.model.zero_score_hessian()) {
            Matrix hs = p.model.score_hessian(theta, d.x, d.y) -
                        p.model.score_hessian(theta, d.x, d.z);
            h += (d.weight * dl) * hs;
        }
    }
    return h;
}

struct SolveSettings {
    double tolerance = 1e-10;  // max-norm of the gradient
    int max_iterations = 500;
};

struct SolveResult {
    Vector theta;
    double grad_norm = 0.0;
    double hessian_min_eigenvalue = 0.0;
    bool converged = false;
    int iterations = 0;
    bool damping_applied = false;  // Levenberg shift was needed at some iterate
};

struct MinimumCertificate {
    double grad_norm = 0.0;
    double min_eigenvalue = 0.0;
    bool is_strict_local_min = false;
};

inline double min_eigenvalue(const Matrix& h) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

inline MinimumCertificate certify_minimum(const Problem& p, const Vector& theta) {
    MinimumCertificate cert;
    cert.grad_norm = gradient(p, theta).lpNorm<Eigen::Infinity>();
    cert.min_eigenvalue = min_eigenvalue(hessian(p, theta));
    cert.is_strict_local_min = cert.grad_norm <= 1e-8 && cert.min_eigenvalue >= 1e-10;
    return cert;
}

/// Damped Newton descent with Levenberg shifts on indefinite Hessians and a
/// backtracking (Armijo) line search. Stops when ||grad||_inf <= tolerance.
inline SolveResult minimize(const Problem& p, const Vector& theta_init,
                            const SolveSettings& settings = {}) {
    if (!theta_init.allFinite()) throw InputError("minimize: nonfinite initial point");
    SolveResult out;
    Vector theta = theta_init;
    double f = loss_of(p, theta);
    int iter = 0;
    for (; iter < settings.max_iterations; ++iter) {
        Vector g = gradient(p, theta);
        out.grad_norm = g.lpNorm<Eigen::Infinity>();
        if (out.grad_norm <= settings.tolerance) {
            out.converged = true;
            break;
        }
        Matrix h = hessian(p, theta);
        Vector step;
        double mu = 0.0;
        for (;;) {
            Matrix hd = h;
            if (mu > 0.0) hd.diagonal().array() += mu;
            Eigen::LLT<Matrix> llt(hd);
            if (llt.info() == Eigen::Success) {
                step = llt.solve(-g);
                break;
            }
            out.damping_applied = true;
            mu = mu == 0.0 ? std::max(1e-8, 1e-6 * h.diagonal().cwiseAbs().maxCoeff()) : mu * 10.0;
            if (mu > 1e12) {  // give up on curvature, fall back to steepest descent
                step = -g;
                break;
            }
        }
        // Backtracking line search on the loss value.
        double t = 1.0;
        double slope = g.dot(step);
        if (slope >= 0.0) {  // not a descent direction (pathological); use -g
            step = -g;
            slope = -g.squaredNorm();
        }
        // Near the optimum the true decrease falls below the rounding error
        // of the loss sum; without the floor the search rejects every step
        // and the iteration stalls just above the gradient tolerance.
        double floor = 1e-14 * (1.0 + std::abs(f));
        bool moved = false;
        for (int ls = 0; ls < 60; ++ls) {
            Vector cand = theta + t * step;
            double fc = loss_of(p, cand);
            if (fc <= f + 1e-4 * t * slope + floor) {
                theta = std::move(cand);
                f = fc;
                moved = true;
                break;
            }
            t *= 0.5;
        }
        if (!moved) break;  // line search stalled; report nonconvergence
    }
    out.iterations = iter;
    out.theta = theta;
    out.grad_norm = gradient(p, theta).lpNorm<Eigen::Infinity>();
    out.converged = out.grad_norm <= settings.tolerance;
    out.hessian_min_eigenvalue = min_eigenvalue(hessian(p, theta));
    return out;
}

}  // namespace prefmono
