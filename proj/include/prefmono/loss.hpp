#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "prefmono/domain.hpp"
#include "prefmono/errors.hpp"
#include "prefmono/root_law.hpp"

namespace prefmono {

namespace detail {

/// log(sigmoid(t)) = -log(1 + exp(-t)), overflow-safe.
inline double log_sigmoid(double t) {
    return t >= 0.0 ? -std::log1p(std::exp(-t)) : t - std::log1p(std::exp(t));
}

inline double sigmoid(double t) {
    return t >= 0.0 ? 1.0 / (1.0 + std::exp(-t)) : std::exp(t) / (1.0 + std::exp(t));
}

}  // namespace detail

enum class VerdictKind { holds, violated, not_applicable };

inline const char* to_string(VerdictKind v) {
    switch (v) {
        case VerdictKind::holds: return "holds";
        case VerdictKind::violated: return "violated";
        case VerdictKind::not_applicable: return "not_applicable";
    }
    return "?";
}

/// One grid point at which an assumption on the loss fails.
struct AssumptionViolation {
    double s;
    double derivative;   // the offending partial derivative value
    std::string detail;
};

struct AssumptionVerdict {
    VerdictKind verdict = VerdictKind::not_applicable;
    std::string reason;
    std::vector<AssumptionViolation> violations;

    bool holds() const { return verdict == VerdictKind::holds; }
};

/// Default certification grid: 401 points on [-20, 20]. The assumptions are
/// universally quantified over s; the grid is the testable surrogate.
inline std::vector<double> default_assumption_grid(int n = 401, double lo = -20.0,
                                                   double hi = 20.0) {
    std::vector<double> g(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
    return g;
}

/// A per-datapoint loss l(s, c) on score difference s and comparison c, with
/// exact first/second s-derivatives and the cross-partial d_c d_s.
class LossFamily {
public:
    enum class Kind { bradley_terry, gbt, uniform_gbt, gaussian_gbt, slic, ipo };

    static LossFamily bradley_terry() {
        return LossFamily(Kind::bradley_terry, ComparisonDomain::binary(), std::nullopt);
    }
    static LossFamily gbt(RootLaw root) {
        ComparisonDomain d = root.domain();
        return LossFamily(Kind::gbt, std::move(d), std::move(root));
    }
    static LossFamily uniform_gbt() {
        return LossFamily(Kind::uniform_gbt, ComparisonDomain::interval(-1.0, 1.0),
                          RootLaw::uniform(-1.0, 1.0));
    }
    static LossFamily gaussian_gbt() {
        return LossFamily(Kind::gaussian_gbt, ComparisonDomain::real_line(), RootLaw::gaussian());
    }
    static LossFamily slic() {
        return LossFamily(Kind::slic, ComparisonDomain::binary(), std::nullopt);
    }
    static LossFamily ipo() {
        return LossFamily(Kind::ipo, ComparisonDomain::binary(), std::nullopt);
    }

    Kind kind() const { return kind_; }
    const ComparisonDomain& domain() const { return domain_; }
    const RootLaw& root() const {
        if (!root_) throw UnsupportedOperationError("loss family has no root law");
        return *root_;
    }
    bool is_gbt_derived() const { return root_.has_value(); }

    /// SLiC is piecewise linear, hence excluded from twice-differentiability.
    bool twice_differentiable() const { return kind_ != Kind::slic; }

    /// Convexity in s (all shipped families are convex in s).
    bool convex_in_s() const { return true; }

    std::string name() const {
        switch (kind_) {
            case Kind::bradley_terry: return "bradley_terry";
            case Kind::gbt: return "gbt";
            case Kind::uniform_gbt: return "uniform_gbt";
            case Kind::gaussian_gbt: return "gaussian_gbt";
            case Kind::slic: return "slic";
            case Kind::ipo: return "ipo";
        }
        return "?";
    }

    double value(double s, double c) const {
        validate(s, c);
        switch (kind_) {
            case Kind::bradley_terry: return -detail::log_sigmoid(c * s);
            case Kind::gbt: return root_->cumulant(s) - c * s;
            case Kind::uniform_gbt: return detail::log_sinhc(s) - c * s;
            case Kind::gaussian_gbt: return s * s / 2.0 - c * s;
            case Kind::slic: return std::max(0.0, 1.0 - c * s);
            case Kind::ipo: {
                double r = 1.0 - c * s;
                return r * r;
            }
        }
        return 0.0;
    }

    double dds(double s, double c) const {
        validate(s, c);
        switch (kind_) {
            case Kind::bradley_terry: return -c * detail::sigmoid(-c * s);
            case Kind::gbt: return root_->cumulant_prime(s) - c;
            case Kind::uniform_gbt: return detail::sinhc_logderiv(s) - c;
            case Kind::gaussian_gbt: return s - c;
            case Kind::slic:
                if (at_slic_kink(s, c))
                    throw NondifferentiableError("slic loss is not differentiable at s = 1/c");
                return c * s < 1.0 ? -c : 0.0;
            case Kind::ipo: return -2.0 * c * (1.0 - c * s);
        }
        return 0.0;
    }

    double d2ds2(double s, double c) const {
        validate(s, c);
        switch (kind_) {
            case Kind::bradley_terry: {
                double p = detail::sigmoid(c * s);
                return p * (1.0 - p);
            }
            case Kind::gbt: return root_->cumulant_second(s);
            case Kind::uniform_gbt: return detail::sinhc_logderiv2(s);
            case Kind::gaussian_gbt: return 1.0;
            case Kind::slic:
                if (at_slic_kink(s, c))
                    throw NondifferentiableError("slic loss is not differentiable at s = 1/c");
                return 0.0;
            case Kind::ipo: return 2.0;
        }
        return 0.0;
    }

    /// Cross-partial d_c d_s l(s, c); identically -1 for every GBT-derived
    /// loss (the loss is bilinear in c and s up to Phi_f).
    double dcds_cross(double s, double c) const {
        validate(s, c);
        if (!is_gbt_derived())
            throw UnsupportedOperationError(
                "cross-partial requires a GBT-derived loss (discrete comparison sets "
                "admit no c-derivative)");
        return -1.0;
    }

    /// Checks d_s l(s, max C) < 0 at every grid point (plus existence of the
    /// maximum and twice differentiability).
    AssumptionVerdict check_assumption_max(const std::vector<double>& s_grid) const {
        AssumptionVerdict out;
        if (!domain_.has_max()) {
            out.verdict = VerdictKind::not_applicable;
            out.reason = "comparison set has no maximum";
            return out;
        }
        double cmax = domain_.max_value();
        for (double s : s_grid) {
            try {
                // GBT losses evaluate the gap max C - Phi'(s) in a stable
                // form; the naive difference rounds to zero for large s.
                double d = is_gbt_derived() ? -root_->max_gap(s) : dds(s, cmax);
                if (!(d < 0.0))
                    out.violations.push_back({s, d, "d_s loss(s, max C) not strictly negative"});
            } catch (const NondifferentiableError&) {
                out.violations.push_back(
                    {s, std::numeric_limits<double>::quiet_NaN(), "nondifferentiable point"});
            }
        }
        if (!twice_differentiable()) {
            out.verdict = VerdictKind::violated;
            out.reason = "loss is not twice continuously differentiable";
            return out;
        }
        out.verdict = out.violations.empty() ? VerdictKind::holds : VerdictKind::violated;
        if (out.verdict == VerdictKind::violated)
            out.reason = "d_s loss(s, max C) fails strict negativity on the grid";
        return out;
    }
    AssumptionVerdict check_assumption_max() const {
        return check_assumption_max(default_assumption_grid());
    }

    /// Checks the intensification hypothesis: C is an interval (or the real
    /// line) and d_c d_s l < 0 everywhere.
    AssumptionVerdict check_assumption_cross(const std::vector<double>& s_grid) const {
        AssumptionVerdict out;
        if (domain_.kind() == ComparisonDomain::Kind::discrete) {
            out.verdict = VerdictKind::not_applicable;
            out.reason = "comparison set is discrete, not an interval";
            return out;
        }
        if (!is_gbt_derived()) {
            out.verdict = VerdictKind::not_applicable;
            out.reason = "loss has no c-derivative";
            return out;
        }
        double c_probe = domain_.has_max() ? domain_.max_value() / 2.0 : 0.0;
        for (double s : s_grid) {
            double cross = dcds_cross(s, c_probe);
            if (!(cross < 0.0))
                out.violations.push_back({s, cross, "d_c d_s loss not strictly negative"});
        }
        out.verdict = out.violations.empty() ? VerdictKind::holds : VerdictKind::violated;
        if (out.verdict == VerdictKind::violated)
            out.reason = "d_c d_s loss fails strict negativity on the grid";
        return out;
    }
    AssumptionVerdict check_assumption_cross() const {
        return check_assumption_cross(default_assumption_grid());
    }

private:
    LossFamily(Kind k, ComparisonDomain d, std::optional<RootLaw> r)
        : kind_(k), domain_(std::move(d)), root_(std::move(r)) {}

    bool at_slic_kink(double s, double c) const { return std::abs(c * s - 1.0) < 1e-12; }

    void validate(double s, double c) const {
        if (!std::isfinite(s)) throw InputError("loss: nonfinite score difference");
        if (!domain_.contains(c))
            throw DomainViolationError("loss: comparison value " + std::to_string(c) +
                                       " outside domain " + domain_.describe());
    }

    Kind kind_;
    ComparisonDomain domain_;
    std::optional<RootLaw> root_;
};

}  // namespace prefmono
