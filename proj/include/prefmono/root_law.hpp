#pragma once

#include <cmath>
#include <numeric>
#include <vector>

#include "prefmono/domain.hpp"
#include "prefmono/errors.hpp"

namespace prefmono {

namespace detail {

/// log(cosh(s)) without overflow for large |s|.
inline double log_cosh(double s) {
    double a = std::abs(s);
    return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
}

/// log(sinh(s)/s) for s on the real line; the singularity at 0 is removable.
/// Series below the switch point keeps the error under 1e-20.
inline double log_sinhc(double s) {
    double a = std::abs(s);
    if (a < 1e-4) {
        double s2 = s * s;
        return s2 / 6.0 - s2 * s2 / 180.0;
    }
    // log(sinh a) = a + log1p(-exp(-2a)) - log 2
    return a + std::log1p(-std::exp(-2.0 * a)) - std::log(2.0) - std::log(a);
}

/// d/ds log(sinh(s)/s) = coth(s) - 1/s, with series near 0.
inline double sinhc_logderiv(double s) {
    if (std::abs(s) < 1e-4) {
        return s / 3.0 - s * s * s / 45.0;
    }
    return 1.0 / std::tanh(s) - 1.0 / s;
}

/// d^2/ds^2 log(sinh(s)/s) = 1/s^2 - 1/sinh(s)^2, with series near 0.
inline double sinhc_logderiv2(double s) {
    if (std::abs(s) < 1e-4) {
        return 1.0 / 3.0 - s * s / 15.0;
    }
    if (std::abs(s) > 350.0) return 1.0 / (s * s);  // sinh overflows; its term vanishes
    double sh = std::sinh(s);
    return 1.0 / (s * s) - 1.0 / (sh * sh);
}

}  // namespace detail

/// A "root law": the base distribution over comparison values whose
/// cumulant-generating function builds a generalized Bradley-Terry loss.
class RootLaw {
public:
    enum class Kind { two_point, uniform, gaussian, tabulated };

    /// Point masses 1/2 at -1 and +1.
    static RootLaw two_point() {
        RootLaw r;
        r.kind_ = Kind::two_point;
        return r;
    }

    /// Uniform density on the symmetric interval [lo, hi], lo = -hi.
    static RootLaw uniform(double lo, double hi) {
        ComparisonDomain::interval(lo, hi);  // validates symmetry
        RootLaw r;
        r.kind_ = Kind::uniform;
        r.half_width_ = hi;
        return r;
    }

    /// Standard normal density on the real line.
    static RootLaw gaussian() {
        RootLaw r;
        r.kind_ = Kind::gaussian;
        return r;
    }

    /// Nonnegative weights on a strictly increasing support grid, integrated
    /// by trapezoidal quadrature.
    static RootLaw tabulated(std::vector<double> support, std::vector<double> weights) {
        if (support.size() != weights.size() || support.size() < 2)
            throw InputError("tabulated root law: support/weights size mismatch or too small");
        for (std::size_t i = 0; i + 1 < support.size(); ++i)
            if (!(support[i] < support[i + 1]))
                throw InputError("tabulated root law: support must be strictly increasing");
        double total = 0.0;
        for (double w : weights) {
            if (!(w >= 0.0) || !std::isfinite(w))
                throw InputError("tabulated root law: weights must be nonnegative and finite");
            total += w;
        }
        if (!(total > 0.0)) throw InputError("tabulated root law: total weight must be positive");
        RootLaw r;
        r.kind_ = Kind::tabulated;
        r.support_ = std::move(support);
        r.weights_ = std::move(weights);
        // Fold the trapezoid coefficients into the stored weights once.
        std::vector<double>& w = r.weights_;
        const std::vector<double>& g = r.support_;
        std::vector<double> quad(w.size());
        for (std::size_t i = 0; i < w.size(); ++i) {
            double left = (i == 0) ? 0.0 : (g[i] - g[i - 1]) / 2.0;
            double right = (i + 1 == w.size()) ? 0.0 : (g[i + 1] - g[i]) / 2.0;
            quad[i] = w[i] * (left + right);
        }
        r.weights_ = std::move(quad);
        return r;
    }

    Kind kind() const { return kind_; }

    /// The comparison domain associated with this root law.
    ComparisonDomain domain() const {
        switch (kind_) {
            case Kind::two_point: return ComparisonDomain::binary();
            case Kind::uniform: return ComparisonDomain::interval(-half_width_, half_width_);
            case Kind::gaussian: return ComparisonDomain::real_line();
            case Kind::tabulated:
                return ComparisonDomain::interval(support_.front(), support_.back());
        }
        return ComparisonDomain::real_line();
    }

    /// Cumulant-generating function Phi_f(s) = log E_f[exp(s*gamma)].
    double cumulant(double s) const {
        if (!std::isfinite(s)) throw InputError("cumulant: nonfinite s");
        switch (kind_) {
            case Kind::two_point: return detail::log_cosh(s);
            case Kind::uniform: return detail::log_sinhc(half_width_ * s);
            case Kind::gaussian: return s * s / 2.0;
            case Kind::tabulated: break;
        }
        double lognum = log_weighted_sum(s, 0);
        double logden = log_weighted_sum(0.0, 0);
        double out = lognum - logden;
        if (!std::isfinite(out)) throw Error("cumulant: nonfinite result");
        return out;
    }

    /// Phi_f'(s); a strictly increasing odd bijection onto the interior of
    /// the domain for bounded root laws.
    double cumulant_prime(double s) const {
        if (!std::isfinite(s)) throw InputError("cumulant_prime: nonfinite s");
        switch (kind_) {
            case Kind::two_point: return std::tanh(s);
            case Kind::uniform: return half_width_ * detail::sinhc_logderiv(half_width_ * s);
            case Kind::gaussian: return s;
            case Kind::tabulated: break;
        }
        return tilted_moment(s, 1);
    }

    /// max C - Phi_f'(s), evaluated without the catastrophic cancellation
    /// that makes tanh(s) round to 1 for large s. Strictly positive for all
    /// finite s when the root law is bounded and not a point mass at max C.
    double max_gap(double s) const {
        if (!std::isfinite(s)) throw InputError("max_gap: nonfinite s");
        switch (kind_) {
            case Kind::two_point: {
                // 1 - tanh(s) = 2 exp(-2s) / (1 + exp(-2s))
                double e = std::exp(-2.0 * s);
                return std::isinf(e) ? 2.0 : 2.0 * e / (1.0 + e);
            }
            case Kind::uniform: {
                double a = half_width_ * s;
                if (a <= 1e-4) return half_width_ - cumulant_prime(s);
                // 1 - coth(a) + 1/a = 1/a - 2/(exp(2a) - 1)
                double d = std::expm1(2.0 * a);
                return half_width_ * (1.0 / a - (std::isinf(d) ? 0.0 : 2.0 / d));
            }
            case Kind::gaussian:
                throw UnsupportedOperationError("max_gap: root law has no maximum");
            case Kind::tabulated: break;
        }
        double cmax = support_.back();
        double shift = -std::numeric_limits<double>::infinity();
        for (double g : support_) shift = std::max(shift, s * g);
        double den = 0.0, num = 0.0;
        for (std::size_t i = 0; i < support_.size(); ++i) {
            double e = weights_[i] * std::exp(s * support_[i] - shift);
            den += e;
            num += e * (cmax - support_[i]);
        }
        return num / den;
    }

    /// Phi_f''(s) = Var of the exponentially tilted law; strictly positive.
    double cumulant_second(double s) const {
        if (!std::isfinite(s)) throw InputError("cumulant_second: nonfinite s");
        switch (kind_) {
            case Kind::two_point: {
                double t = std::tanh(s);
                return 1.0 - t * t;
            }
            case Kind::uniform: {
                double a = half_width_;
                return a * a * detail::sinhc_logderiv2(a * s);
            }
            case Kind::gaussian: return 1.0;
            case Kind::tabulated: break;
        }
        double m1 = tilted_moment(s, 1);
        double m2 = tilted_moment(s, 2);
        return m2 - m1 * m1;
    }

private:
    RootLaw() = default;

    // log sum_i w_i gamma_i^p exp(s gamma_i), max-shift stabilized (p = 0 only).
    double log_weighted_sum(double s, int) const {
        double shift = -std::numeric_limits<double>::infinity();
        for (double g : support_) shift = std::max(shift, s * g);
        double acc = 0.0;
        for (std::size_t i = 0; i < support_.size(); ++i)
            acc += weights_[i] * std::exp(s * support_[i] - shift);
        return shift + std::log(acc);
    }

    // E[gamma^p] under the tilted law proportional to w_i exp(s gamma_i).
    double tilted_moment(double s, int p) const {
        double shift = -std::numeric_limits<double>::infinity();
        for (double g : support_) shift = std::max(shift, s * g);
        double den = 0.0, num = 0.0;
        for (std::size_t i = 0; i < support_.size(); ++i) {
            double e = weights_[i] * std::exp(s * support_[i] - shift);
            den += e;
            num += e * (p == 1 ? support_[i] : support_[i] * support_[i]);
        }
        double out = num / den;
        if (!std::isfinite(out)) throw Error("tilted moment: nonfinite result");
        return out;
    }

    Kind kind_ = Kind::gaussian;
    double half_width_ = 1.0;
    std::vector<double> support_;
    std::vector<double> weights_;
};

}  // namespace prefmono
