#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "oracles.hpp"
#include "prefmono/prefmono.hpp"

using namespace prefmono;
using Catch::Approx;

namespace {

std::vector<LossFamily> all_families() {
    return {LossFamily::bradley_terry(), LossFamily::uniform_gbt(), LossFamily::gaussian_gbt(),
            LossFamily::slic(),          LossFamily::ipo(),
            LossFamily::gbt(RootLaw::two_point())};
}

double random_c(const ComparisonDomain& dom, std::mt19937_64& rng) {
    switch (dom.kind()) {
        case ComparisonDomain::Kind::discrete: {
            const auto& v = dom.values();
            std::uniform_int_distribution<std::size_t> pick(0, v.size() - 1);
            return v[pick(rng)];
        }
        case ComparisonDomain::Kind::interval: {
            std::uniform_real_distribution<double> u(dom.min_value(), dom.max_value());
            return u(rng);
        }
        case ComparisonDomain::Kind::real_line: {
            std::normal_distribution<double> n(0.0, 1.5);
            return n(rng);
        }
    }
    return 0.0;
}

}  // namespace

TEST_CASE("comparison domain invariants") {
    CHECK_THROWS_AS(ComparisonDomain::discrete({}), InputError);
    CHECK_THROWS_AS(ComparisonDomain::discrete({-1.0, 0.5}), InputError);  // asymmetric
    CHECK_THROWS_AS(ComparisonDomain::interval(-2.0, 1.0), InputError);
    CHECK_THROWS_AS(ComparisonDomain::interval(1.0, 1.0), InputError);
    CHECK(ComparisonDomain::binary().max_value() == 1.0);
    CHECK(ComparisonDomain::interval(-1, 1).has_max());
    CHECK_FALSE(ComparisonDomain::real_line().has_max());
    CHECK_THROWS_AS(ComparisonDomain::real_line().max_value(), UnsupportedOperationError);
}

TEST_CASE("projection with tie directions") {
    auto dom = ComparisonDomain::binary();
    CHECK(dom.project(0.0, PushDirection::up) == 1.0);
    CHECK(dom.project(0.0, PushDirection::down) == -1.0);
    CHECK(dom.project(0.4) == 1.0);
    CHECK(dom.project(-3.0) == -1.0);
    auto iv = ComparisonDomain::interval(-1, 1);
    CHECK(iv.project(1.7) == 1.0);
    CHECK(iv.project(0.3) == 0.3);
}

TEST_CASE("loss values match the stated closed forms") {
    CHECK(LossFamily::bradley_terry().value(0.0, 1.0) == Approx(std::log(2.0)));
    CHECK(LossFamily::gaussian_gbt().value(1.0, 1.0) == Approx(-0.5));
    CHECK(LossFamily::uniform_gbt().value(0.0, 0.3) == Approx(0.0).margin(1e-15));
    CHECK(LossFamily::ipo().value(2.0, 1.0) == Approx(1.0));
    CHECK(LossFamily::slic().value(2.0, 1.0) == Approx(0.0).margin(0.0));
    CHECK(LossFamily::slic().value(0.5, -1.0) == Approx(1.5));
}

TEST_CASE("first derivatives match the stated closed forms") {
    CHECK(LossFamily::bradley_terry().dds(0.0, 1.0) == Approx(-0.5));
    CHECK(LossFamily::gaussian_gbt().dds(0.0, 1.0) == Approx(-1.0));
    CHECK(LossFamily::uniform_gbt().dds(0.0, 1.0) == Approx(-1.0));
    CHECK(LossFamily::bradley_terry().d2ds2(0.0, 1.0) == Approx(0.25));
    CHECK(LossFamily::gaussian_gbt().d2ds2(3.7, -0.2) == Approx(1.0));
    CHECK(LossFamily::ipo().d2ds2(0.4, 1.0) == Approx(2.0));
}

TEST_CASE("input validation") {
    auto bt = LossFamily::bradley_terry();
    CHECK_THROWS_AS(bt.value(0.0, 0.5), DomainViolationError);
    CHECK_THROWS_AS(bt.value(std::nan(""), 1.0), InputError);
    CHECK_THROWS_AS(LossFamily::uniform_gbt().value(0.0, 1.5), DomainViolationError);
    CHECK_THROWS_AS(LossFamily::slic().dds(1.0, 1.0), NondifferentiableError);
    CHECK_THROWS_AS(LossFamily::slic().d2ds2(-1.0, -1.0), NondifferentiableError);
}

TEST_CASE("derivatives match central finite differences") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> us(-4.0, 4.0);
    for (const LossFamily& fam : all_families()) {
        for (int trial = 0; trial < 200; ++trial) {
            double s = us(rng);
            double c = random_c(fam.domain(), rng);
            if (fam.kind() == LossFamily::Kind::slic && std::abs(c * s - 1.0) < 1e-3)
                continue;  // kink neighborhood excluded
            INFO(fam.name() << " s=" << s << " c=" << c);
            double fd1 = oracles::central_diff([&](double t) { return fam.value(t, c); }, s);
            CHECK(oracles::rel_err(fam.dds(s, c), fd1) < 1e-6);
            if (fam.twice_differentiable()) {
                double fd2 = oracles::central_diff([&](double t) { return fam.dds(t, c); }, s);
                CHECK(oracles::rel_err(fam.d2ds2(s, c), fd2) < 1e-6);
            }
        }
    }
}

TEST_CASE("cumulant closed forms and trivial values") {
    CHECK(RootLaw::uniform(-1, 1).cumulant(0.0) == Approx(0.0).margin(1e-18));
    CHECK(RootLaw::two_point().cumulant_prime(0.0) == Approx(0.0).margin(1e-18));
    CHECK(RootLaw::two_point().cumulant(1.0) == Approx(std::log(std::cosh(1.0))));
    CHECK(RootLaw::gaussian().cumulant(3.0) == Approx(4.5));
}

TEST_CASE("cumulant derivative is an odd increasing map into the domain interior") {
    for (const RootLaw& root : {RootLaw::two_point(), RootLaw::uniform(-1, 1)}) {
        double lo = root.domain().min_value();
        double hi = root.domain().max_value();
        double prev = -std::numeric_limits<double>::infinity();
        // tanh(s) rounds to exactly 1 past |s| ~ 19, so the strict-interior
        // claim is checked through the dedicated gap evaluation instead
        for (double s : {-15.0, -5.0, -1.0, -0.1, 0.1, 1.0, 5.0, 15.0}) {
            double d = root.cumulant_prime(s);
            CHECK(d > lo);
            CHECK(d < hi);
            CHECK(d > prev);
            prev = d;
            CHECK(std::abs(root.cumulant_prime(s) + root.cumulant_prime(-s)) < 1e-10);
        }
        for (double s : {-20.0, -1.0, 0.0, 1.0, 20.0, 300.0}) CHECK(root.max_gap(s) > 0.0);
    }
    CHECK(RootLaw::two_point().max_gap(1.0) == Approx(1.0 - std::tanh(1.0)));
    CHECK_THROWS_AS(RootLaw::gaussian().max_gap(0.0), UnsupportedOperationError);
}

TEST_CASE("tabulated root law reproduces the uniform closed form") {
    const int n = 2001;
    std::vector<double> grid(n), w(n, 1.0);
    for (int i = 0; i < n; ++i) grid[i] = -1.0 + 2.0 * i / (n - 1);
    RootLaw tab = RootLaw::tabulated(grid, w);
    RootLaw uni = RootLaw::uniform(-1, 1);
    for (double s : {0.5, 2.0, -3.0, 10.0}) {
        CHECK(std::abs(tab.cumulant(s) - uni.cumulant(s)) < 1e-4);
        CHECK(std::abs(tab.cumulant_prime(s) - uni.cumulant_prime(s)) < 1e-4);
    }
    // stays finite far out thanks to the max-shift
    CHECK(std::isfinite(tab.cumulant(600.0)));
    CHECK_THROWS_AS(RootLaw::tabulated({0.0, 1.0}, {-1.0, 1.0}), InputError);
    CHECK_THROWS_AS(RootLaw::tabulated({0.0, 1.0}, {0.0, 0.0}), InputError);
}

TEST_CASE("cross-partial is exactly -1 for GBT losses and unsupported otherwise") {
    CHECK(LossFamily::gaussian_gbt().dcds_cross(3.0, 0.2) == -1.0);
    CHECK(LossFamily::uniform_gbt().dcds_cross(-1.0, 0.0) == -1.0);
    std::vector<double> grid(41), w(41, 1.0);
    for (int i = 0; i < 41; ++i) grid[i] = -1.0 + i * 0.05;
    CHECK(LossFamily::gbt(RootLaw::tabulated(grid, w)).dcds_cross(0.7, 0.1) == -1.0);
    CHECK_THROWS_AS(LossFamily::bradley_terry().dcds_cross(0.0, 1.0),
                    UnsupportedOperationError);
    CHECK_THROWS_AS(LossFamily::ipo().dcds_cross(0.0, 1.0), UnsupportedOperationError);
}

TEST_CASE("gaussian loss quadratic rewriting") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    auto fam = LossFamily::gaussian_gbt();
    for (int i = 0; i < 50; ++i) {
        double s = u(rng), c = u(rng);
        CHECK(std::abs(fam.value(s, c) - (0.5 * (s - c) * (s - c) - 0.5 * c * c)) < 1e-12);
    }
}

TEST_CASE("maximal-comparison assumption verdicts") {
    auto grid = default_assumption_grid();
    CHECK(LossFamily::bradley_terry().check_assumption_max(grid).holds());
    CHECK(LossFamily::uniform_gbt().check_assumption_max(grid).holds());
    CHECK(LossFamily::gbt(RootLaw::two_point()).check_assumption_max(grid).holds());

    auto ipo = LossFamily::ipo().check_assumption_max({-1.0, 0.0, 2.0});
    CHECK(ipo.verdict == VerdictKind::violated);
    REQUIRE_FALSE(ipo.violations.empty());
    CHECK(ipo.violations[0].s == 2.0);
    CHECK(ipo.violations[0].derivative == Approx(2.0));  // d_s (1-s)^2 at s=2

    auto gauss = LossFamily::gaussian_gbt().check_assumption_max(grid);
    CHECK(gauss.verdict == VerdictKind::not_applicable);

    auto slic = LossFamily::slic().check_assumption_max(grid);
    CHECK(slic.verdict == VerdictKind::violated);  // flat for s > 1, and not C^2
}

TEST_CASE("intensification assumption verdicts") {
    CHECK(LossFamily::gaussian_gbt().check_assumption_cross().holds());
    CHECK(LossFamily::uniform_gbt().check_assumption_cross().holds());
    CHECK(LossFamily::bradley_terry().check_assumption_cross().verdict ==
          VerdictKind::not_applicable);
}
