#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "bdcover/doubling.hpp"
#include "bdcover/errors.hpp"

using namespace bdcover;

namespace {

FqMatrix from_rows(std::shared_ptr<const GFq> F,
                   const std::vector<std::vector<int>>& rows) {
    FqMatrix m(F, rows.size(), rows.empty() ? 0 : rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j) m.at(i, j) = rows[i][j];
    return m;
}

// (size, class, stabilizer order, n_minus) tuples, order-independent.
using OrbitKey = std::tuple<std::size_t, std::string, std::size_t, bool>;

std::multiset<OrbitKey> orbit_keys(const DoubleCosetReport& rep) {
    std::multiset<OrbitKey> out;
    for (const auto& o : rep.orbits)
        out.insert({o.size, o.cls, o.stabilizer_order, o.n_minus_detected});
    return out;
}

}  // namespace

TEST_CASE("finite field linear algebra") {
    auto F = std::make_shared<const GFq>(5);
    FqMatrix a = from_rows(F, {{1, 2}, {3, 4}});
    FqMatrix b = from_rows(F, {{0, 1}, {1, 0}});
    CHECK(fq_mul(a, b) == from_rows(F, {{2, 1}, {4, 3}}));
    CHECK(fq_add(a, b) == from_rows(F, {{1, 3}, {4, 4}}));
    CHECK(fq_sub(a, a) == FqMatrix(F, 2, 2));
    CHECK(fq_transpose(a) == from_rows(F, {{1, 3}, {2, 4}}));
    CHECK(fq_det(a) == F->sub(4, F->mul(2, 3)));  // 4 - 6 = -2 = 3 mod 5
    CHECK(fq_det(a) == 3);
    CHECK(fq_rank(a) == 2);
    CHECK(fq_invertible(a));
    CHECK(fq_mul(a, fq_inverse(a)) == FqMatrix::identity(F, 2));

    FqMatrix sing = from_rows(F, {{1, 2}, {2, 4}});
    CHECK(fq_rank(sing) == 1);
    CHECK_FALSE(fq_invertible(sing));
    CHECK_THROWS_AS(fq_inverse(sing), NotInGroup);

    // Row space is a canonical (reduced echelon) basis.
    FqMatrix rs = fq_row_space(from_rows(F, {{2, 4, 0}, {1, 2, 1}}));
    CHECK(rs == from_rows(F, {{1, 2, 0}, {0, 0, 1}}));
    CHECK(fq_in_row_space(rs, {3, 1, 2}));
    CHECK_FALSE(fq_in_row_space(rs, {0, 1, 0}));

    // x * a = b solved exactly; inconsistent systems are rejected.
    auto x = fq_solve_row(a, {1, 0});
    CHECK(x.size() == 2);
    FqMatrix xr = from_rows(F, {x});
    CHECK(fq_mul(xr, a) == from_rows(F, {{1, 0}}));
    CHECK_THROWS_AS(fq_solve_row(sing, {0, 1}), ShapeMismatch);

    // Intersection of row spaces.
    FqMatrix u = from_rows(F, {{1, 0, 0}, {0, 1, 0}});
    FqMatrix v = from_rows(F, {{0, 1, 0}, {0, 0, 1}});
    FqMatrix w = fq_intersect_row_spaces(u, v);
    CHECK(w == from_rows(F, {{0, 1, 0}}));
}

TEST_CASE("classical group construction with verified orders") {
    auto sp2q2 = build_group('C', 1, 2);
    CHECK(sp2q2.order() == 6);
    CHECK(sp2q2.generators.size() <= 2);

    auto sp2q3 = build_group('C', 1, 3);
    CHECK(sp2q3.order() == 24);

    auto so3q3 = build_group('B', 1, 3);
    CHECK(so3q3.order() == 24);

    auto gl1q5 = build_group('A', 1, 5);
    CHECK(gl1q5.order() == 4);

    auto so2q3 = build_group('D', 1, 3);
    CHECK(so2q3.order() == 2);

    // Every element preserves the form; products stay in the group.
    std::mt19937 rng(11);
    for (int t = 0; t < 25; ++t) {
        const auto& g = sp2q3.elements[rng() % sp2q3.order()];
        const auto& h = sp2q3.elements[rng() % sp2q3.order()];
        CHECK(preserves_form(sp2q3.space, g));
        CHECK(sp2q3.contains(fq_mul(g, h)));
    }
    FqMatrix not_iso = from_rows(sp2q3.space.F, {{1, 1}, {0, 1}});
    CHECK(sp2q3.contains(not_iso));  // unipotent upper triangular is symplectic
    FqMatrix scale = from_rows(sp2q3.space.F, {{2, 0}, {0, 1}});
    CHECK_FALSE(sp2q3.contains(scale));

    // Orthogonal groups in even characteristic are not supported.
    CHECK_THROWS_AS(build_group('B', 1, 2), UnsupportedFamily);
    CHECK_THROWS_AS(build_group('D', 1, 2), UnsupportedFamily);
    // Exhaustion guard.
    CHECK_THROWS_AS(build_group('C', 2, 5, 1000), TooLarge);
}

TEST_CASE("doubled space layout and iota embedding") {
    auto G = build_group('C', 1, 3);
    auto dbl = make_doubled(G.space, 2);
    CHECK(dbl.total.dim == 8);
    CHECK(dbl.w_delta.rows() == 4);
    CHECK(dbl.flag.size() == 1);
    CHECK(dbl.y_k.rows() == 6);

    // W^{Delta,k} is maximal isotropic for the total form.
    FqMatrix gram = fq_mul(fq_mul(dbl.w_delta, dbl.total.form),
                           fq_transpose(dbl.w_delta));
    CHECK(gram == FqMatrix(dbl.base.F, 4, 4));

    // Y_1 < Y_k, and in odd characteristic Y_1 meets W^{Delta,k} trivially.
    for (std::size_t i = 0; i < dbl.flag[0].rows(); ++i) {
        std::vector<int> r(dbl.total.dim);
        for (std::size_t j = 0; j < dbl.total.dim; ++j) r[j] = dbl.flag[0].at(i, j);
        CHECK(fq_in_row_space(dbl.y_k, r));
    }
    CHECK(fq_intersect_row_spaces(dbl.flag[0], dbl.w_delta).rows() == 0);

    // iota is an injective homomorphism landing in the isometry group.
    std::mt19937 rng(23);
    for (int t = 0; t < 40; ++t) {
        const auto& g1 = G.elements[rng() % G.order()];
        const auto& g2 = G.elements[rng() % G.order()];
        const auto& h1 = G.elements[rng() % G.order()];
        const auto& h2 = G.elements[rng() % G.order()];
        FqMatrix lhs = fq_mul(iota(g1, g2, dbl), iota(h1, h2, dbl));
        FqMatrix rhs = iota(fq_mul(g1, h1), fq_mul(g2, h2), dbl);
        CHECK(lhs == rhs);
        CHECK(preserves_form(dbl.total, lhs));
    }
    FqMatrix scale = from_rows(dbl.base.F, {{2, 0}, {0, 1}});
    CHECK_THROWS_AS(iota(scale, scale, dbl), NotInGroup);

    // iota(g1, g2) stabilizes W^{Delta,k} exactly when g1 == g2: the
    // intersection of iota(G x G) with the Siegel parabolic is the diagonal.
    for (long q : {2L, 3L}) {
        auto Gq = build_group('C', 1, q);
        auto d1 = make_doubled(Gq.space, 1);
        std::size_t diag = 0;
        for (const auto& g1 : Gq.elements)
            for (const auto& g2 : Gq.elements) {
                FqMatrix img = fq_row_space(fq_mul(d1.w_delta, iota(g1, g2, d1)));
                bool stab = img == fq_row_space(d1.w_delta);
                if (stab) ++diag;
                CHECK(stab == (g1 == g2));
            }
        CHECK(diag == Gq.order());
    }
}

TEST_CASE("flag character on the unipotent radical") {
    auto G = build_group('C', 1, 2);

    // k = 1: no flag, the character argument is identically zero.
    auto d1 = make_doubled(G.space, 1);
    CHECK(enumerate_unipotent_radical(d1).size() == 1);
    CHECK(psi_argument(FqMatrix::identity(d1.base.F, 4), d1) == 0);

    auto dbl = make_doubled(G.space, 2);
    CHECK(psi_argument(FqMatrix::identity(dbl.base.F, 8), dbl) == 0);

    // Elements acting nontrivially on a flag quotient are rejected.
    FqMatrix s = from_rows(G.space.F, {{0, 1}, {1, 0}});
    CHECK_THROWS_AS(psi_argument(iota(s, s, dbl), dbl), NotUnipotentInFlag);

    // Frozen: |N-bullet| = 2048 for Sp_2(F_2) at k = 2, and the character
    // argument splits it evenly.
    auto bullet = enumerate_unipotent_radical(dbl);
    CHECK(bullet.size() == 2048);
    std::map<int, int> dist;
    for (const auto& u : bullet) ++dist[psi_argument(u, dbl)];
    CHECK(dist[0] == 1024);
    CHECK(dist[1] == 1024);

    // psi is additive on the (abelian-graded) radical.
    std::mt19937 rng(5);
    for (int t = 0; t < 60; ++t) {
        const auto& u = bullet[rng() % bullet.size()];
        const auto& v = bullet[rng() % bullet.size()];
        int lhs = psi_argument(fq_mul(u, v), dbl);
        int rhs = dbl.base.F->add(psi_argument(u, dbl), psi_argument(v, dbl));
        CHECK(lhs == rhs);
    }

    // Exhaustion guard.
    CHECK_THROWS_AS(enumerate_unipotent_radical(make_doubled(G.space, 3), 100),
                    TooLarge);
}

TEST_CASE("maximal isotropic subspace enumeration") {
    CHECK(enumerate_lagrangians(build_group('C', 1, 2).space).size() == 3);
    CHECK(enumerate_lagrangians(build_group('C', 1, 3).space).size() == 4);

    auto d2 = make_doubled(build_group('C', 1, 2).space, 1);
    CHECK(enumerate_lagrangians(d2.total).size() == 15);  // (2+1)(4+1)
    auto d3 = make_doubled(build_group('C', 1, 3).space, 1);
    CHECK(enumerate_lagrangians(d3.total).size() == 40);  // (3+1)(9+1)

    auto d22 = make_doubled(build_group('C', 1, 2).space, 2);
    auto lags = enumerate_lagrangians(d22.total);
    CHECK(lags.size() == 2295);  // (2+1)(4+1)(8+1)(16+1)

    // Each entry is isotropic of the right dimension, canonical, and unique.
    std::set<FqMatrix> seen;
    for (const auto& L : lags) {
        CHECK(L.rows() == 4);
        CHECK(fq_mul(fq_mul(L, d22.total.form), fq_transpose(L)) ==
              FqMatrix(d22.base.F, 4, 4));
        CHECK(fq_row_space(L) == L);
        CHECK(seen.insert(L).second);
    }

    CHECK_THROWS_AS(enumerate_lagrangians(build_group('A', 1, 5).space),
                    UnsupportedFamily);
    CHECK_THROWS_AS(enumerate_lagrangians(d22.total, 10), TooLarge);
}

TEST_CASE("coset representatives move the reference Lagrangian correctly") {
    auto dbl = make_doubled(build_group('C', 1, 3).space, 1);
    auto lags = enumerate_lagrangians(dbl.total);
    for (const auto& L : lags) {
        FqMatrix gamma = coset_representative(dbl, L);
        CHECK(preserves_form(dbl.total, gamma));
        CHECK(fq_row_space(fq_mul(dbl.w_delta, gamma)) == L);
    }
}

TEST_CASE("coset classification for k = 1") {
    auto rep2 = enumerate_double_cosets('C', 1, 2, 1);
    CHECK(rep2.total_cosets == 15);
    CHECK(orbit_keys(rep2) == std::multiset<OrbitKey>{
              {6, "main", 6, false}, {9, "negligible", 4, true}});

    auto rep3 = enumerate_double_cosets('C', 1, 3, 1);
    CHECK(rep3.total_cosets == 40);
    CHECK(orbit_keys(rep3) == std::multiset<OrbitKey>{
              {24, "main", 24, false}, {16, "negligible", 36, true}});

    // The main orbit stabilizer is the diagonal copy of G.
    for (const auto& rep : {rep2, rep3}) {
        std::size_t order = rep.q == 2 ? 6 : 24;
        for (const auto& o : rep.orbits)
            if (o.cls == "main") CHECK(o.stabilizer_order == order);
    }

    // Orbit sizes partition the coset space.
    std::size_t sum2 = 0, sum3 = 0;
    for (const auto& o : rep2.orbits) sum2 += o.size;
    for (const auto& o : rep3.orbits) sum3 += o.size;
    CHECK(sum2 == 15);
    CHECK(sum3 == 40);

    // k = 1 has no flag: every coset is in the trivial-character class.
    auto dbl = make_doubled(build_group('C', 1, 2).space, 1);
    for (const auto& L : enumerate_lagrangians(dbl.total)) {
        auto r = omega_classify(coset_representative(dbl, L), dbl);
        CHECK(r.label == OmegaClass::Tilde);
        CHECK(r.intersection_dim == 0);
        CHECK(r.geometric_trivial);
    }
}

TEST_CASE("coset classification for k = 2 over F_2") {
    auto rep = enumerate_double_cosets('C', 1, 2, 2, 1u << 22, 4);
    CHECK(rep.total_cosets == 2295);
    CHECK(orbit_keys(rep) == std::multiset<OrbitKey>{
              {6, "main", 6, false},
              {9, "omega1", 4, true},
              {72, "omega2", 4, true},
              {144, "omega1", 2, true},
              {144, "omega1", 2, false},
              {768, "negligible", 1, false},
              {1152, "negligible", 2, true}});
    std::size_t sum = 0;
    for (const auto& o : rep.orbits) sum += o.size;
    CHECK(sum == 2295);

    // Per-coset frozen tabulation: label x intersection dim x normalization.
    auto dbl = make_doubled(build_group('C', 1, 2).space, 2);
    auto lags = enumerate_lagrangians(dbl.total);
    std::map<std::string, int> tab;
    for (const auto& L : lags) {
        auto r = omega_classify(coset_representative(dbl, L), dbl);
        // The character-trivial class is exactly the geometric criterion
        // L cap Y_{k-1} = 0.
        CHECK((r.label == OmegaClass::Tilde) == r.geometric_trivial);
        CHECK(r.geometric_trivial == (r.intersection_dim == 0));
        std::string key =
            (r.label == OmegaClass::Omega1
                 ? "O1"
                 : r.label == OmegaClass::Omega2 ? "O2" : "T");
        key += "/d" + std::to_string(r.intersection_dim) + "/f" +
               std::to_string(r.normalization_fired ? 1 : 0);
        ++tab[key];
    }
    CHECK(tab == std::map<std::string, int>{{"O1/d1/f0", 288},
                                            {"O1/d2/f0", 14},
                                            {"O2/d1/f0", 72},
                                            {"O2/d2/f1", 1},
                                            {"T/d0/f1", 1920}});

    // In characteristic 2 the identity coset meets Y_{k-1} in dimension 2,
    // so it is not in the trivial class (an odd-characteristic-only fact).
    auto id_rep =
        omega_classify(iota(FqMatrix::identity(dbl.base.F, 2),
                            FqMatrix::identity(dbl.base.F, 2), dbl),
                       dbl);
    CHECK(id_rep.label == OmegaClass::Omega2);
    CHECK(id_rep.intersection_dim == 2);
    CHECK(id_rep.normalization_fired);
}

TEST_CASE("modular character of the flag stabilizer is trivial") {
    auto G3 = build_group('C', 1, 3);
    auto dbl3 = make_doubled(G3.space, 2);
    std::mt19937 rng(7);
    for (int t = 0; t < 50; ++t) {
        const auto& g1 = G3.elements[rng() % G3.order()];
        const auto& g2 = G3.elements[rng() % G3.order()];
        CHECK(modular_character_check(g1, g2, dbl3) == 1);
    }
    auto G2 = build_group('C', 1, 2);
    auto dbl2 = make_doubled(G2.space, 2);
    for (const auto& g1 : G2.elements)
        for (const auto& g2 : G2.elements)
            CHECK(modular_character_check(g1, g2, dbl2) == 1);
}

TEST_CASE("degenerate pair classification") {
    auto F = std::make_shared<const GFq>(3);

    // Full pair: one proper subspace of dim m, invertible quotient map.
    {
        FqMatrix y1 = from_rows(F, {{1, 0, 0, 0}, {0, 1, 0, 0}});
        WhittakerPair p{IsotropicFlag{{y1}}, {FqMatrix::identity(F, 2)}};
        auto r = whittaker_pair_classify(p, 2, 2);
        CHECK(r.cls == PairClass::InOrbitKm);
        CHECK(r.rank_a == 2);
        CHECK(r.stabilizer_gl_m == 2);
    }
    // Rank-deficient quotient map: the residual unipotent S_A appears.
    {
        FqMatrix y1 = from_rows(F, {{1, 0, 0, 0}, {0, 1, 0, 0}});
        FqMatrix a1(F, 2, 2);
        a1.at(0, 0) = 1;
        WhittakerPair p{IsotropicFlag{{y1}}, {a1}};
        auto r = whittaker_pair_classify(p, 2, 2);
        CHECK(r.cls == PairClass::Other);
        CHECK(r.rank_a == 1);
        CHECK(r.s_a_dim == 1);
    }
    // Longer flag with nonvanishing k-fold composition lies higher.
    {
        FqMatrix y1 = from_rows(F, {{1, 0, 0}});
        FqMatrix y2 = from_rows(F, {{1, 0, 0}, {0, 1, 0}});
        FqMatrix a1(F, 1, 1), a2(F, 1, 1);
        a1.at(0, 0) = 1;
        a2.at(0, 0) = 1;
        WhittakerPair p{IsotropicFlag{{y1, y2}}, {a1, a2}};
        auto r = whittaker_pair_classify(p, 2, 1);
        CHECK(r.cls == PairClass::Higher);
    }
    // One map per proper flag subspace is required.
    {
        FqMatrix y1 = from_rows(F, {{1, 0, 0, 0}, {0, 1, 0, 0}});
        WhittakerPair p{IsotropicFlag{{y1}},
                        {FqMatrix::identity(F, 2), FqMatrix::identity(F, 2)}};
        CHECK_THROWS_AS(whittaker_pair_classify(p, 2, 2), ShapeMismatch);
    }
}
