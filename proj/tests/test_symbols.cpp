#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "bdcover/localfield.hpp"

using namespace bdcover;

namespace {

LaurentQ random_rat_series(std::mt19937& rng, std::size_t prec) {
    std::uniform_int_distribution<long> val(-3, 3), num(-5, 5), lead(1, 5);
    std::vector<Rat> c;
    c.push_back(Rat(lead(rng)) * (num(rng) % 2 == 0 ? 1 : -1));
    for (int i = 0; i < 4; ++i) c.push_back(Rat(num(rng)));
    return LaurentQ::from_coefficients(RatOps{}, val(rng), std::move(c), prec);
}

LaurentF random_fq_series(std::mt19937& rng, const GFqOps& ops, std::size_t prec) {
    long q = ops.F->q();
    std::uniform_int_distribution<long> val(-3, 3), any(0, q - 1), nz(1, q - 1);
    std::vector<int> c;
    c.push_back(static_cast<int>(nz(rng)));
    for (int i = 0; i < 4; ++i) c.push_back(static_cast<int>(any(rng)));
    return LaurentF::from_coefficients(ops, val(rng), std::move(c), prec);
}

LocalElem random_local(std::mt19937& rng, const TameLocalField& K) {
    std::uniform_int_distribution<long> val(-3, 3), u(1, 50);
    Int unit = u(rng);
    if (K.kind() == TameLocalField::Kind::PAdic)
        while (unit % K.residue_card() == 0) unit = u(rng);
    else
        unit = 1 + unit % (K.residue_card() - 1);
    return local_uniformizer_pow(K, val(rng), unit);
}

}  // namespace

TEST_CASE("laurent series arithmetic") {
    std::size_t P = default_laurent_precision();
    RatOps R;
    auto tau = LaurentQ::variable_power(R, 1, P);
    auto one = LaurentQ::constant(R, Rat(1), P);

    SUBCASE("construction and normalization") {
        CHECK(LaurentQ::zero(R, P).is_zero());
        CHECK_THROWS_AS(LaurentQ::zero(R, P).valuation(), ZeroInput);
        auto f = LaurentQ::from_coefficients(R, -2, {Rat(0), Rat(0), Rat(3), Rat(5)}, P);
        CHECK(f.valuation() == 0);
        CHECK(f.leading() == 3);
        CHECK(f.coeff(1) == 5);
        CHECK(f.coeff(-7) == 0);
        CHECK(f.coeff(static_cast<long>(P) - 1) == 0);  // exact input: padded
        CHECK_THROWS_AS(f.coeff(static_cast<long>(P)), InsufficientPrecision);
        CHECK(LaurentQ::from_coefficients(R, 5, {Rat(0), Rat(0)}, P).is_zero());
    }

    SUBCASE("ring operations") {
        auto f = one + tau;                        // 1 + tau
        auto g = f * f;                            // 1 + 2 tau + tau^2
        CHECK(g.coeff(0) == 1);
        CHECK(g.coeff(1) == 2);
        CHECK(g.coeff(2) == 1);
        auto h = f * f.inverse();
        CHECK(h.valuation() == 0);
        CHECK(h.leading() == 1);
        for (long k = 1; k < static_cast<long>(h.precision()); ++k) CHECK(h.coeff(k) == 0);
        CHECK(tau.pow(-3).valuation() == -3);
        CHECK((f.pow(3)).coeff(2) == 3);
        CHECK_THROWS_AS(LaurentQ::zero(R, P).inverse(), ZeroInput);
        // complete cancellation cannot be certified
        CHECK_THROWS_AS((void)(f - f), InsufficientPrecision);
    }

    SUBCASE("finite-field coefficients") {
        auto F7 = std::make_shared<const GFq>(7);
        GFqOps G{F7};
        auto t = LaurentF::variable_power(G, 1, P);
        auto u = LaurentF::constant(G, 3, P) + t;
        auto w = u * u.inverse();
        CHECK(w.leading() == 1);
        CHECK(w.coeff(1) == 0);
        CHECK((u.pow(7)).coeff(0) == F7->pow(3, 7));
    }
}

TEST_CASE("residue symbol: frozen values and laws") {
    std::size_t P = default_laurent_precision();
    RatOps R;
    auto tau = LaurentQ::variable_power(R, 1, P);
    auto one = LaurentQ::constant(R, Rat(1), P);

    SUBCASE("frozen examples over Q") {
        CHECK(residue_symbol(tau, tau) == -1);
        CHECK(residue_symbol(tau, -tau) == 1);
        auto c5 = LaurentQ::constant(R, Rat(5), P);
        CHECK(residue_symbol(c5, tau) == 5);          // 5^{v(tau)} = 5
        CHECK(residue_symbol(tau, c5) == Rat(1, 5));  // 5^{-v(tau)} = 1/5
        CHECK(residue_symbol(c5, one + tau) == 1);  // two units
        CHECK_THROWS_AS(residue_symbol(LaurentQ::zero(R, P), tau), ZeroInput);
    }

    SUBCASE("steinberg relation over Q") {
        std::mt19937 rng(2024);
        int done = 0;
        while (done < 220) {
            auto f = random_rat_series(rng, P);
            LaurentQ g = one - f;
            if (g.is_zero()) continue;
            CHECK(residue_symbol(f, g) == 1);
            ++done;
        }
    }

    SUBCASE("steinberg relation over F_7") {
        auto F7 = std::make_shared<const GFq>(7);
        GFqOps G{F7};
        auto onef = LaurentF::constant(G, 1, P);
        std::mt19937 rng(4711);
        int done = 0;
        while (done < 220) {
            auto f = random_fq_series(rng, G, P);
            bool cancels = !f.is_zero() && f.valuation() == 0 && f.leading() == 1;
            if (cancels) continue;  // 1 - f could vanish beyond the window
            auto g = onef - f;
            CHECK(residue_symbol(f, g) == 1);
            ++done;
        }
    }

    SUBCASE("bimultiplicativity") {
        std::mt19937 rng(99);
        auto F7 = std::make_shared<const GFq>(7);
        GFqOps G{F7};
        for (int i = 0; i < 200; ++i) {
            auto a = random_rat_series(rng, P);
            auto b = random_rat_series(rng, P);
            auto c = random_rat_series(rng, P);
            CHECK(residue_symbol(a * b, c) == residue_symbol(a, c) * residue_symbol(b, c));
            CHECK(residue_symbol(a, b * c) == residue_symbol(a, b) * residue_symbol(a, c));
            auto x = random_fq_series(rng, G, P);
            auto y = random_fq_series(rng, G, P);
            auto z = random_fq_series(rng, G, P);
            CHECK(residue_symbol(x * y, z) ==
                  F7->mul(residue_symbol(x, z), residue_symbol(y, z)));
        }
    }
}

TEST_CASE("finite field frozen data") {
    GFq F9(9);
    CHECK(F9.p() == 3);
    CHECK(F9.degree() == 2);
    CHECK(F9.modulus() == std::vector<int>{1, 0, 1});  // x^2 + 1
    CHECK(F9.generator() == 4);                        // x + 1
    std::vector<long> logs{-1, 0, 4, 6, 1, 7, 2, 3, 5};
    for (int a = 1; a < 9; ++a) CHECK(F9.dlog(a) == logs[a]);
    GFq F5(5);
    CHECK(F5.generator() == 2);
    CHECK(F5.dlog(4) == 2);
    CHECK(F5.dlog(2) == 1);
    CHECK_THROWS_AS(GFq(6), DimensionMismatch);
    CHECK_THROWS_AS(GFq(1 << 17), TooLarge);
    CHECK_THROWS_AS(F9.inv(0), ZeroInput);
}

TEST_CASE("tame local fields and hilbert symbol") {
    SUBCASE("field validation") {
        CHECK_THROWS_AS(TameLocalField::padic(2, 1), FieldMismatch);   // even residue char
        CHECK_THROWS_AS(TameLocalField::padic(9, 2), FieldMismatch);   // not prime
        CHECK_THROWS_AS(TameLocalField::padic(5, 3), FieldMismatch);   // 3 does not divide 4
        CHECK_THROWS_AS(TameLocalField::fq_laurent(9, 5), FieldMismatch);
        CHECK(TameLocalField::padic(5, 4).describe() == "Q_5 with n=4");
        CHECK(TameLocalField::fq_laurent(9, 8).describe() == "F_9((t)) with n=8");
    }

    auto K = TameLocalField::padic(5, 4);

    SUBCASE("element arithmetic") {
        auto x = local_from_rational(K, Rat(50, 7));  // 2 * 25 / 7
        CHECK(x.val == 2);
        auto y = local_mul(K, x, local_inv(K, x));
        CHECK(y.val == 0);
        CHECK(y.unit == 1);
        CHECK(local_unit_residue(K, local_from_rational(K, Rat(7))) == 2);
        CHECK_THROWS_AS(local_from_rational(K, Rat(0)), ZeroInput);
        CHECK_THROWS_AS(local_unit(K, 10), ZeroInput);
    }

    SUBCASE("frozen symbol values over Q_5, n = 4") {
        auto five = local_from_rational(K, Rat(5));
        auto two = local_from_rational(K, Rat(2));
        CHECK(tame_hilbert(five, five, K) == RootOfUnityIndex{4, 2});
        CHECK(tame_hilbert(two, five, K) == RootOfUnityIndex{4, 1});
        CHECK(tame_hilbert(five, two, K) == RootOfUnityIndex{4, 3});  // antisymmetry
        // units pair trivially in the tame quotient
        auto three = local_from_rational(K, Rat(3));
        CHECK(tame_hilbert(two, three, K).idx == 0);
    }

    SUBCASE("steinberg relation (a, 1-a)") {
        std::mt19937 rng(7);
        std::uniform_int_distribution<long> val(-2, 2), num(1, 40);
        int done = 0;
        while (done < 220) {
            long v = val(rng);
            Int u = num(rng);
            if (u % 5 == 0) continue;
            Rat a(u);
            for (long i = 0; i < v; ++i) a *= 5;
            for (long i = 0; i > v; --i) a /= 5;
            if (a == 1) continue;
            Rat b = 1 - a;
            CHECK(tame_hilbert(local_from_rational(K, a), local_from_rational(K, b), K).idx ==
                  0);
            ++done;
        }
        auto L = TameLocalField::fq_laurent(9, 8);
        GFqOps G{L.residue_field_ptr()};
        std::size_t P = default_laurent_precision();
        auto one = LaurentF::constant(G, 1, P);
        done = 0;
        while (done < 220) {
            auto f = random_fq_series(rng, G, P);
            if (f.valuation() == 0 && f.leading() == 1) continue;
            auto g = one - f;
            CHECK(tame_hilbert(local_from_series(L, f), local_from_series(L, g), L).idx == 0);
            ++done;
        }
    }

    SUBCASE("bimultiplicativity and antisymmetry") {
        std::mt19937 rng(31);
        for (const auto& F : {TameLocalField::padic(5, 4), TameLocalField::padic(7, 3),
                              TameLocalField::fq_laurent(9, 8)}) {
            Int n = F.n();
            for (int i = 0; i < 70; ++i) {
                auto a = random_local(rng, F);
                auto b = random_local(rng, F);
                auto c = random_local(rng, F);
                CHECK(tame_hilbert(local_mul(F, a, b), c, F).idx ==
                      (tame_hilbert(a, c, F).idx + tame_hilbert(b, c, F).idx) % n);
                CHECK(tame_hilbert(a, local_mul(F, b, c), F).idx ==
                      (tame_hilbert(a, b, F).idx + tame_hilbert(a, c, F).idx) % n);
                CHECK((tame_hilbert(a, b, F).idx + tame_hilbert(b, a, F).idx) % n == 0);
            }
        }
    }
}

TEST_CASE("torus cover multiplication and commutator") {
    auto K = TameLocalField::padic(5, 4);
    auto mun = CoeffGroup::mu_n(4);

    SUBCASE("group laws") {
        QuadraticForm Q = QuadraticForm::diagonal(2, 1);
        Q.offdiag(0, 1) = 3;
        Q.offdiag(1, 0) = 3;
        std::mt19937 rng(5);
        auto rand_elem = [&] {
            std::uniform_int_distribution<long> z(0, 3);
            return torus_cover_element(
                K, CoeffElem::residue(mun, z(rng)),
                {random_local(rng, K), random_local(rng, K)});
        };
        for (int i = 0; i < 30; ++i) {
            auto x = rand_elem(), y = rand_elem(), z = rand_elem();
            auto lhs = torus_cover_mul(torus_cover_mul(x, y, Q), z, Q);
            auto rhs = torus_cover_mul(x, torus_cover_mul(y, z, Q), Q);
            CHECK(lhs.zeta == rhs.zeta);
            auto e = torus_cover_mul(x, torus_cover_inv(x, Q), Q);
            CHECK(e.zeta == CoeffElem::zero(mun));
            for (const auto& pt : e.point) {
                CHECK(pt.val == 0);
                CHECK(pt.unit == 1);
            }
            auto id = torus_cover_identity(K, 2);
            CHECK(torus_cover_mul(x, id, Q).zeta == x.zeta);
        }
    }

    SUBCASE("commutator matches the symbol pairing on basis pairs") {
        std::mt19937 rng(12);
        std::uniform_int_distribution<long> coef(-2, 2);
        std::uniform_int_distribution<std::size_t> rk(1, 3);
        for (int trial = 0; trial < 3; ++trial) {
            std::size_t r = rk(rng);
            QuadraticForm Q = QuadraticForm::zero(r);
            for (std::size_t i = 0; i < r; ++i) Q.diag[i] = coef(rng);
            for (std::size_t i = 0; i < r; ++i)
                for (std::size_t j = i + 1; j < r; ++j) {
                    Int c = coef(rng);
                    Q.offdiag(i, j) = c;
                    Q.offdiag(j, i) = c;
                }
            auto u = random_local(rng, K);
            auto v = random_local(rng, K);
            for (std::size_t i = 0; i < r; ++i)
                for (std::size_t j = 0; j < r; ++j) {
                    std::vector<LocalElem> s(r, local_unit(K, 1)), t(r, local_unit(K, 1));
                    s[i] = u;
                    t[j] = v;
                    auto x = torus_cover_element(K, CoeffElem::zero(mun), s);
                    auto y = torus_cover_element(K, CoeffElem::zero(mun), t);
                    Vec ei(r, 0), ej(r, 0);
                    ei[i] = 1;
                    ej[j] = 1;
                    Int expect = tame_hilbert(u, v, K).idx * eval_B(Q, ei, ej);
                    CHECK(torus_cover_commutator(x, y, Q) ==
                          CoeffElem::residue(mun, expect));
                }
        }
    }

    SUBCASE("field mismatch is rejected") {
        auto L = TameLocalField::fq_laurent(9, 8);
        QuadraticForm Q = QuadraticForm::diagonal(1, 1);
        auto x = torus_cover_identity(K, 1);
        auto y = torus_cover_identity(L, 1);
        CHECK_THROWS_AS(torus_cover_mul(x, y, Q), FieldMismatch);
        CHECK_THROWS_AS(torus_cover_element(K, CoeffElem::residue(CoeffGroup::mu_n(3), 1),
                                            {local_unit(K, 1)}),
                        CoeffMismatch);
    }
}
