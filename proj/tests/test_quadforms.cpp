#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "bdcover/quadform.hpp"

using namespace bdcover;

TEST_CASE("frozen invariant forms") {
    SUBCASE("C_2, a=1: diag (1,1), no cross terms, long coroot diff has value 2") {
        auto d = build_root_datum(Family::C, 2);
        auto Q = weyl_invariant_form(d, 1);
        CHECK(Q.diag == std::vector<Int>{1, 1});
        CHECK(Q.offdiag(0, 1) == 0);
        CHECK(eval_Q(Q, {1, -1}) == 2);
    }
    SUBCASE("D_3, a=2: diag (1,1,1)") {
        auto d = build_root_datum(Family::D, 3);
        auto Q = weyl_invariant_form(d, 2);
        CHECK(Q.diag == std::vector<Int>{1, 1, 1});
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = i + 1; j < 3; ++j) CHECK(Q.offdiag(i, j) == 0);
    }
    SUBCASE("B_2, a=1 violates parity") {
        auto d = build_root_datum(Family::B, 2);
        CHECK_THROWS_AS(weyl_invariant_form(d, 1), ParityViolation);
    }
}

TEST_CASE("parity errors exactly for odd a in B and D, never C or GL") {
    for (Int a = 1; a <= 6; ++a) {
        for (auto [fam, n] : std::vector<std::pair<Family, std::size_t>>{
                 {Family::B, 2}, {Family::B, 3}, {Family::D, 2}, {Family::D, 3}}) {
            auto d = build_root_datum(fam, n);
            if (a % 2 == 1)
                CHECK_THROWS_AS(weyl_invariant_form(d, a), ParityViolation);
            else
                CHECK_NOTHROW(weyl_invariant_form(d, a));
        }
        for (auto [fam, n] : std::vector<std::pair<Family, std::size_t>>{
                 {Family::C, 1}, {Family::C, 3}, {Family::A, 1}, {Family::A, 2}}) {
            CHECK_NOTHROW(weyl_invariant_form(build_root_datum(fam, n), a));
        }
    }
}

TEST_CASE("solver gives a one-dimensional space and full Weyl invariance") {
    std::vector<std::pair<Family, std::size_t>> cases;
    for (std::size_t n = 1; n <= 3; ++n) cases.push_back({Family::A, n});
    for (std::size_t n = 2; n <= 4; ++n) cases.push_back({Family::B, n});
    for (std::size_t n = 1; n <= 4; ++n) cases.push_back({Family::C, n});
    for (std::size_t n = 2; n <= 4; ++n) cases.push_back({Family::D, n});
    for (auto [fam, n] : cases) {
        CAPTURE(static_cast<int>(fam));
        CAPTURE(n);
        auto d = build_root_datum(fam, n);
        auto basis = invariant_form_space(d, fam == Family::A);
        REQUIRE(basis.size() == 1);
        auto W = weyl_group(d);
        for (Int a = 1; a <= 4; ++a) {
            bool admissible = !((fam == Family::B || fam == Family::D) && a % 2 == 1);
            if (!admissible) continue;
            auto Q = weyl_invariant_form(d, a);
            for (const auto& w : W) REQUIRE(pullback_form(Q, w) == Q);
        }
    }
}

TEST_CASE("GL family invariant space is two-dimensional before the cross-term cut") {
    auto d = build_root_datum(Family::A, 2);
    CHECK(invariant_form_space(d, false).size() == 2);
    CHECK(invariant_form_space(d, true).size() == 1);
}

TEST_CASE("eval_Q / eval_B identities") {
    auto Q = QuadraticForm::diagonal(2, 1);
    CHECK(eval_Q(Q, {1, -1}) == 2);
    CHECK(eval_B(Q, {1, 0}, {0, 1}) == 0);
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> dist(-9, 9);
    QuadraticForm R = QuadraticForm::zero(4);
    for (std::size_t i = 0; i < 4; ++i) {
        R.diag[i] = dist(rng);
        for (std::size_t j = i + 1; j < 4; ++j) {
            Int v = dist(rng);
            R.offdiag(i, j) = v;
            R.offdiag(j, i) = v;
        }
    }
    for (int t = 0; t < 100; ++t) {
        Vec y(4), z(4);
        for (auto& c : y) c = dist(rng);
        for (auto& c : z) c = dist(rng);
        CHECK(eval_B(R, y, y) == 2 * eval_Q(R, y));
        Vec sum(4);
        for (std::size_t i = 0; i < 4; ++i) sum[i] = y[i] + z[i];
        CHECK(eval_B(R, y, z) == eval_Q(R, sum) - eval_Q(R, y) - eval_Q(R, z));
    }
}

TEST_CASE("n_Q values") {
    SUBCASE("direct arithmetic") {
        auto d = build_root_datum(Family::C, 1);  // reference coroot e_1, Q = a
        auto Q2 = weyl_invariant_form(d, 2);
        CHECK(compute_nQ(4, Q2, d) == 2);   // 4/gcd(4,2)
        CHECK(compute_nQ(3, Q2, d) == 3);   // 3/gcd(3,2)
        auto Q1 = weyl_invariant_form(d, 1);
        CHECK(compute_nQ(2, Q1, d) == 2);   // Sp_2, a=1, n=2
    }
    SUBCASE("torus convention uses 2a") {
        auto d = build_root_datum(Family::A, 0);  // GL_1
        auto Q = weyl_invariant_form(d, 1);
        CHECK(compute_nQ(4, Q, d) == 2);  // 4/gcd(4, 2*1)
    }
    SUBCASE("reference value even in rank >= 2") {
        for (auto [fam, n, a] : std::vector<std::tuple<Family, std::size_t, int>>{
                 {Family::C, 2, 1}, {Family::C, 2, 3}, {Family::B, 3, 2},
                 {Family::D, 3, 2}, {Family::A, 2, 1}}) {
            auto d = build_root_datum(fam, n);
            auto Q = weyl_invariant_form(d, a);
            CHECK(eval_Q(Q, d.coroots[d.simple[0]]) % 2 == 0);
            CHECK_NOTHROW(compute_nQ(6, Q, d));
        }
    }
}

TEST_CASE("decomposability across partitions") {
    auto diagQ = QuadraticForm::diagonal(4, 3);
    CHECK(is_decomposable(diagQ, {0, 0, 1, 1}));
    CHECK(is_decomposable(diagQ, {0, 1, 2, 3}));
    QuadraticForm gl2 = QuadraticForm::diagonal(2, 1);
    gl2.offdiag(0, 1) = 1;
    gl2.offdiag(1, 0) = 1;
    CHECK(!is_decomposable(gl2, {0, 1}));
    CHECK(is_decomposable(gl2, {0, 0}));
    auto sq = direct_sum_form(diagQ, diagQ);
    CHECK(is_decomposable(sq, {0, 0, 0, 0, 1, 1, 1, 1}));
}
