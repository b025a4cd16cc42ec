#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "prefmono/prefmono.hpp"

using namespace prefmono;
using Catch::Approx;

TEST_CASE("max-diagonal dominance examples") {
    CHECK(is_max_diag_dominant(Matrix::Identity(3, 3)).ok);

    Matrix bad(2, 2);
    bad << 1.0, 2.0, 2.0, 1.0;
    DominanceVerdict v = is_max_diag_dominant(bad);
    CHECK_FALSE(v.ok);
    CHECK(v.row == 0);
    CHECK(v.col == 1);

    Matrix g(2, 2);
    g << 2.0, 1.0, 1.0, 2.0;
    CHECK(is_max_diag_dominant(g / 3.0).ok);

    // ties on the boundary count as dominant
    Matrix tie(2, 2);
    tie << 1.0, 1.0, 1.0, 1.0;
    CHECK(is_max_diag_dominant(tie).ok);
}

TEST_CASE("strict diagonal dominance with sign pattern") {
    Matrix m(2, 2);
    m << 2.0, -1.0, -1.0, 2.0;
    CHECK(is_strictly_diag_dominant_M(m).ok);

    Matrix weak(2, 2);
    weak << 1.0, -1.0, -1.0, 1.0;
    CHECK_FALSE(is_strictly_diag_dominant_M(weak).ok);

    Matrix pos_off(2, 2);
    pos_off << 2.0, 1.0, 1.0, 2.0;
    DominanceVerdict v = is_strictly_diag_dominant_M(pos_off);
    CHECK_FALSE(v.ok);
    CHECK(v.row == 0);
    CHECK(v.col == 1);

    Matrix neg_diag(2, 2);
    neg_diag << -3.0, -1.0, -1.0, 3.0;
    CHECK_FALSE(is_strictly_diag_dominant_M(neg_diag).ok);
}

TEST_CASE("inverse-difference inequality on hand examples") {
    LemmaVerdict id = lemma_inverse_difference_check(Matrix::Identity(4, 4));
    CHECK(id.ok);
    // for N = I the tightest triple gives margin 0 (w == y, z arbitrary)
    CHECK(id.min_margin == Approx(0.0).margin(1e-15));
    CHECK(id.min_diag_gap == Approx(1.0));

    Matrix m(2, 2);
    m << 2.0, -1.0, -1.0, 2.0;
    LemmaVerdict v = lemma_inverse_difference_check(m);
    CHECK(v.ok);
    // N = (1/3) [[2,1],[1,2]]: N_yy - N_yz = 1/3, N_zy - N_zz = -1/3
    CHECK(v.min_diag_gap == Approx(1.0 / 3.0));
    CHECK(v.min_margin == Approx(0.0).margin(1e-12));
}

TEST_CASE("inverse-difference inequality rejects invalid inputs") {
    Matrix asym(2, 2);
    asym << 2.0, -1.0, 0.5, 2.0;
    CHECK_THROWS_AS(lemma_inverse_difference_check(asym), InputError);

    Matrix not_dom(2, 2);
    not_dom << 1.0, -1.0, -1.0, 1.0;
    CHECK_THROWS_AS(lemma_inverse_difference_check(not_dom), PreconditionError);
}

TEST_CASE("inverse-difference inequality holds on random dominant matrices") {
    std::mt19937_64 rng(307);
    for (int trial = 0; trial < 1000; ++trial) {
        Matrix m = random_dominant_matrix(8, rng);
        REQUIRE(is_strictly_diag_dominant_M(m).ok);
        LemmaVerdict v = lemma_inverse_difference_check(m);
        INFO("trial " << trial << " margin " << v.min_margin << " at (" << v.y << "," << v.z
                      << "," << v.w << ")");
        CHECK(v.ok);
        CHECK(v.min_diag_gap > 0.0);
    }
}

TEST_CASE("random dominant matrices are positive definite") {
    std::mt19937_64 rng(311);
    for (int trial = 0; trial < 50; ++trial) {
        Matrix m = random_dominant_matrix(5, rng);
        CHECK(min_eigenvalue(m) > 0.0);
    }
}
