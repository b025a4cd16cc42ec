#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "prefmono/errors.hpp"

namespace prefmono {

/// Direction in which a projection tie is resolved (matters only for
/// discrete comparison sets, where the nearest point can be ambiguous).
enum class PushDirection { up, down };

/// The comparison value set C: a finite symmetric set, a symmetric bounded
/// interval, or the whole real line.
class ComparisonDomain {
public:
    enum class Kind { discrete, interval, real_line };

    static ComparisonDomain discrete(std::vector<double> values) {
        if (values.empty()) throw InputError("discrete domain: empty value set");
        std::vector<double> v = std::move(values);
        std::sort(v.begin(), v.end());
        for (std::size_t i = 0; i + 1 < v.size(); ++i) {
            if (!(v[i] < v[i + 1]))
                throw InputError("discrete domain: values must be strictly sorted");
        }
        for (double c : v) {
            if (!std::isfinite(c)) throw InputError("discrete domain: nonfinite value");
            if (!std::binary_search(v.begin(), v.end(), -c))
                throw InputError("discrete domain: not symmetric about 0");
        }
        ComparisonDomain d;
        d.kind_ = Kind::discrete;
        d.values_ = std::move(v);
        return d;
    }

    static ComparisonDomain interval(double lo, double hi) {
        if (!std::isfinite(lo) || !std::isfinite(hi))
            throw InputError("interval domain: nonfinite bound");
        if (!(lo < hi)) throw InputError("interval domain: requires lo < hi");
        if (lo != -hi) throw InputError("interval domain: must be symmetric about 0 (lo = -hi)");
        ComparisonDomain d;
        d.kind_ = Kind::interval;
        d.lo_ = lo;
        d.hi_ = hi;
        return d;
    }

    static ComparisonDomain real_line() {
        ComparisonDomain d;
        d.kind_ = Kind::real_line;
        return d;
    }

    /// The binary comparison set {-1, +1} used by BT, SLiC and IPO.
    static ComparisonDomain binary() { return discrete({-1.0, 1.0}); }

    Kind kind() const { return kind_; }

    bool has_max() const { return kind_ != Kind::real_line; }

    double max_value() const {
        switch (kind_) {
            case Kind::discrete: return values_.back();
            case Kind::interval: return hi_;
            case Kind::real_line:
                throw UnsupportedOperationError("real-line domain has no maximum");
        }
        return 0.0;
    }

    double min_value() const {
        switch (kind_) {
            case Kind::discrete: return values_.front();
            case Kind::interval: return lo_;
            case Kind::real_line:
                throw UnsupportedOperationError("real-line domain has no minimum");
        }
        return 0.0;
    }

    bool contains(double c, double tol = 1e-9) const {
        if (!std::isfinite(c)) return false;
        switch (kind_) {
            case Kind::discrete:
                for (double v : values_)
                    if (std::abs(c - v) <= tol) return true;
                return false;
            case Kind::interval: return c >= lo_ - tol && c <= hi_ + tol;
            case Kind::real_line: return true;
        }
        return false;
    }

    /// Nearest-point projection onto the domain; ties on discrete sets are
    /// resolved in the given push direction.
    double project(double t, PushDirection tie = PushDirection::up) const {
        switch (kind_) {
            case Kind::interval: return std::clamp(t, lo_, hi_);
            case Kind::real_line: return t;
            case Kind::discrete: break;
        }
        double best = values_.front();
        double best_dist = std::abs(t - best);
        for (double v : values_) {
            double dist = std::abs(t - v);
            if (dist < best_dist - 1e-15) {
                best = v;
                best_dist = dist;
            } else if (std::abs(dist - best_dist) <= 1e-15) {
                if ((tie == PushDirection::up && v > best) ||
                    (tie == PushDirection::down && v < best)) {
                    best = v;
                    best_dist = dist;
                }
            }
        }
        return best;
    }

    /// Values of a discrete domain (throws for other variants).
    const std::vector<double>& values() const {
        if (kind_ != Kind::discrete)
            throw UnsupportedOperationError("values() requires a discrete domain");
        return values_;
    }

    std::string describe() const {
        switch (kind_) {
            case Kind::discrete: {
                std::string s = "{";
                for (std::size_t i = 0; i < values_.size(); ++i) {
                    if (i) s += ", ";
                    s += std::to_string(values_[i]);
                }
                return s + "}";
            }
            case Kind::interval:
                return "[" + std::to_string(lo_) + ", " + std::to_string(hi_) + "]";
            case Kind::real_line: return "R";
        }
        return "?";
    }

    bool operator==(const ComparisonDomain& o) const {
        return kind_ == o.kind_ && lo_ == o.lo_ && hi_ == o.hi_ && values_ == o.values_;
    }

private:
    ComparisonDomain() = default;
    Kind kind_ = Kind::real_line;
    double lo_ = 0.0, hi_ = 0.0;
    std::vector<double> values_;
};

}  // namespace prefmono
