#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "prefmono/domain.hpp"
#include "prefmono/errors.hpp"

namespace prefmono {

/// A weighted conditional pairwise comparison (x, y, z, c, w): y vs z under
/// background x, with judgment c and multiset weight w (1 = ordinary datum).
struct Comparison {
    std::string x;
    std::string y;
    std::string z;
    double c = 0.0;
    double weight = 1.0;
};

/// Formats a double with 17 significant digits (round-trips bit-exactly).
inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// An immutable weighted comparison multiset over a fixed comparison domain.
/// Perturbations return new datasets; originals are never modified.
class Dataset {
public:
    explicit Dataset(ComparisonDomain domain, std::vector<Comparison> comparisons = {})
        : domain_(std::move(domain)), comparisons_(std::move(comparisons)) {
        for (const Comparison& d : comparisons_) validate(d);
    }

    const ComparisonDomain& domain() const { return domain_; }
    const std::vector<Comparison>& comparisons() const { return comparisons_; }
    std::size_t size() const { return comparisons_.size(); }

    /// Appends (x, y, z, max C) with weight eps.
    Dataset add_unequivocal(const std::string& x, const std::string& y, const std::string& z,
                            double eps) const {
        if (!domain_.has_max())
            throw UnsupportedOperationError(
                "unequivocal comparison requires a comparison set with a maximum");
        if (!(eps >= 0.0) || !std::isfinite(eps))
            throw InputError("unequivocal weight must be finite and nonnegative");
        if (y == z) throw InputError("unequivocal comparison requires y != z");
        std::vector<Comparison> next = comparisons_;
        next.push_back({x, y, z, domain_.max_value(), eps});
        return Dataset(domain_, std::move(next));
    }

    /// The eps-intensification push: comparisons on (x, y, z) move to
    /// proj_C(c + eps), the reversed triple (x, z, y) to proj_C(c - eps),
    /// everything else is untouched. Projection ties resolve in the
    /// direction of the push.
    Dataset intensify(const std::string& x, const std::string& y, const std::string& z,
                      double eps) const {
        if (!std::isfinite(eps)) throw InputError("intensification step must be finite");
        if (y == z) throw InputError("intensification requires y != z");
        std::vector<Comparison> next = comparisons_;
        for (Comparison& d : next) {
            double delta = 0.0;
            if (d.x == x && d.y == y && d.z == z) delta = eps;
            else if (d.x == x && d.y == z && d.z == y) delta = -eps;
            else continue;
            PushDirection tie = delta >= 0.0 ? PushDirection::up : PushDirection::down;
            d.c = domain_.project(d.c + delta, tie);
        }
        return Dataset(domain_, std::move(next));
    }

    /// Number of occurrences of the exact triple (x, y, z).
    int count_triple(const std::string& x, const std::string& y, const std::string& z) const {
        int n = 0;
        for (const Comparison& d : comparisons_)
            if (d.x == x && d.y == y && d.z == z) ++n;
        return n;
    }

    void save_csv(std::ostream& os) const {
        os << "x,y,z,c,weight\n";
        for (const Comparison& d : comparisons_)
            os << d.x << ',' << d.y << ',' << d.z << ',' << format_double(d.c) << ','
               << format_double(d.weight) << '\n';
    }

    void save_csv(const std::string& path) const {
        std::ofstream os(path);
        if (!os) throw Error("cannot open '" + path + "' for writing");
        save_csv(os);
    }

    static Dataset load_csv(std::istream& is, ComparisonDomain domain) {
        std::string line;
        if (!std::getline(is, line)) throw InputError("dataset file: missing header");
        if (line != "x,y,z,c,weight")
            throw InputError("dataset file: unexpected header '" + line + "'");
        std::vector<Comparison> comps;
        int lineno = 1;
        while (std::getline(is, line)) {
            ++lineno;
            if (line.empty()) continue;
            std::stringstream ss(line);
            std::string fx, fy, fz, fc, fw;
            if (!std::getline(ss, fx, ',') || !std::getline(ss, fy, ',') ||
                !std::getline(ss, fz, ',') || !std::getline(ss, fc, ',') ||
                !std::getline(ss, fw))
                throw InputError("dataset file line " + std::to_string(lineno) +
                                 ": expected 5 comma-separated fields");
            try {
                comps.push_back({fx, fy, fz, std::stod(fc), std::stod(fw)});
            } catch (const std::exception&) {
                throw InputError("dataset file line " + std::to_string(lineno) +
                                 ": unparseable number");
            }
        }
        return Dataset(std::move(domain), std::move(comps));
    }

    static Dataset load_csv(const std::string& path, ComparisonDomain domain) {
        std::ifstream is(path);
        if (!is) throw Error("cannot open dataset file '" + path + "'");
        return load_csv(is, std::move(domain));
    }

private:
    void validate(const Comparison& d) const {
        if (d.y == d.z)
            throw InputError("comparison requires y != z (got y = z = '" + d.y + "')");
        if (!std::isfinite(d.weight) || d.weight < 0.0)
            throw InputError("comparison weight must be finite and nonnegative");
        if (!domain_.contains(d.c))
            throw DomainViolationError("comparison value " + std::to_string(d.c) +
                                       " outside domain " + domain_.describe());
    }

    ComparisonDomain domain_;
    std::vector<Comparison> comparisons_;
};

}  // namespace prefmono
