#include "bdcover/reports.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <ctime>
#include <functional>
#include <optional>
#include <random>
#include <sstream>

#include "bdcover/bd.hpp"
#include "bdcover/doubling.hpp"
#include "bdcover/errors.hpp"
#include "bdcover/localfield.hpp"
#include "bdcover/realization.hpp"

namespace bdcover {

namespace {

using Json = nlohmann::ordered_json;

Json jint(const Int& v) {
    if (v >= std::numeric_limits<long long>::min() &&
        v <= std::numeric_limits<long long>::max())
        return Json(v.convert_to<long long>());
    return Json(v.str());
}

Json jvec(const Vec& v) {
    Json a = Json::array();
    for (const auto& e : v) a.push_back(jint(e));
    return a;
}

Json jmat(const IntMatrix& m) {
    Json a = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(jint(m(i, j)));
        a.push_back(std::move(row));
    }
    return a;
}

Json jform(const QuadraticForm& Q) {
    Json d = Json::array();
    for (const auto& e : Q.diag) d.push_back(jint(e));
    return Json{{"rank", Q.rank()}, {"diag", std::move(d)}, {"offdiag", jmat(Q.offdiag)}};
}

Json jfqmatrix(const FqMatrix& m) {
    return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", m.entries()}};
}

std::optional<Family> parse_family(const std::string& s) {
    if (s == "A") return Family::A;
    if (s == "B") return Family::B;
    if (s == "C") return Family::C;
    if (s == "D") return Family::D;
    return std::nullopt;
}

/// Run one named check, converting library errors into fail results.
void run_check(ReportDocument& doc, const std::string& name,
               const std::function<std::pair<bool, Json>()>& body) {
    CheckResult r{name, "pass", Json::object()};
    try {
        auto [ok, payload] = body();
        r.status = ok ? "pass" : "fail";
        r.payload = std::move(payload);
    } catch (const Error& e) {
        r.status = "fail";
        r.payload = Json{{"error", e.what()}};
    }
    doc.results.push_back(std::move(r));
}

void skip_check(ReportDocument& doc, const std::string& name, const std::string& why) {
    doc.results.push_back({name, "skip", Json{{"reason", why}}});
}

Int weyl_order_oracle(Family f, std::size_t n) {
    auto fact = [](std::size_t m) {
        Int r = 1;
        for (std::size_t i = 2; i <= m; ++i) r *= i;
        return r;
    };
    Int two_pow = Int(1) << n;
    switch (f) {
        case Family::A: return fact(n + 1);
        case Family::B:
        case Family::C: return two_pow * fact(n);
        case Family::D: return (two_pow / 2) * fact(n);
    }
    return 0;
}

// ---------------------------------------------------------------- rootdatum

void cmd_rootdatum(ReportDocument& doc, Family fam, std::size_t rank) {
    std::optional<RootDatum> datum;
    run_check(doc, "construct", [&]() -> std::pair<bool, Json> {
        datum = build_root_datum(fam, rank);
        Json roots = Json::array(), coroots = Json::array();
        for (const auto& r : datum->roots) roots.push_back(jvec(r));
        for (const auto& c : datum->coroots) coroots.push_back(jvec(c));
        Json j{{"family", family_name(fam)},
               {"param", datum->param},
               {"rank", datum->rank()},
               {"roots", std::move(roots)},
               {"coroots", std::move(coroots)},
               {"simple", datum->simple},
               {"pairing", jmat(datum->pairing)}};
        return {true, std::move(j)};
    });
    if (!datum) return;

    run_check(doc, "reflections-permute-roots", [&]() -> std::pair<bool, Json> {
        std::size_t checked = 0;
        for (std::size_t s = 0; s < datum->simple.size(); ++s) {
            IntMatrix w = datum->reflection_on_X(datum->simple[s]);
            for (const auto& alpha : datum->roots) {
                if (!datum->root_index(w.apply(alpha))) return {false, Json{{"failed_at", s}}};
                ++checked;
            }
        }
        return {true, Json{{"pairs_checked", checked}}};
    });

    run_check(doc, "weyl-group-order", [&]() -> std::pair<bool, Json> {
        Int expect = weyl_order_oracle(fam, datum->param);
        std::size_t got = weyl_group(*datum).size();
        return {Int(got) == expect, Json{{"order", got}, {"oracle", jint(expect)}}};
    });

    if (datum->roots.size() <= 40) {
        run_check(doc, "sign-table", [&]() -> std::pair<bool, Json> {
            auto table = chevalley_signs(*datum);
            Json rows = Json::array();
            for (const auto& [pair, sign] : table.signs)
                rows.push_back(Json::array({pair.first, pair.second, sign}));
            return {true, Json{{"signs", std::move(rows)}}};
        });
    } else {
        skip_check(doc, "sign-table", "root system too large for the full table");
    }
}

// -------------------------------------------------------------------- qform

void cmd_qform(ReportDocument& doc, Family fam, std::size_t rank, const Int& a,
               const Int& n) {
    RootDatum datum = build_root_datum(fam, rank);

    run_check(doc, "invariant-space-dimension", [&]() -> std::pair<bool, Json> {
        auto basis = invariant_form_space(datum, fam == Family::A);
        return {basis.size() == 1, Json{{"dimension", basis.size()}}};
    });

    std::optional<QuadraticForm> Q;
    run_check(doc, "invariant-form", [&]() -> std::pair<bool, Json> {
        Q = weyl_invariant_form(datum, a);
        bool invariant = true;
        std::size_t order = 0;
        if (datum.rank() <= 5) {
            for (const auto& w : weyl_group(datum)) {
                ++order;
                if (!(pullback_form(*Q, w) == *Q)) invariant = false;
            }
        }
        Json j = jform(*Q);
        j["a"] = jint(a);
        j["weyl_elements_checked"] = order;
        return {invariant, std::move(j)};
    });

    run_check(doc, "n-Q", [&]() -> std::pair<bool, Json> {
        if (!Q) return {false, Json{{"error", "no invariant form available"}}};
        Int nq = compute_nQ(n, *Q, datum);
        return {true, Json{{"n", jint(n)}, {"n_Q", jint(nq)}}};
    });
}

// ------------------------------------------------------------------- square

void cmd_square(ReportDocument& doc, Family fam, std::size_t rank, const Int& a,
                const Int& k, const Int& n) {
    std::optional<SquareConstruction> sc;
    run_check(doc, "construct", [&]() -> std::pair<bool, Json> {
        RootDatum datum = build_root_datum(fam, rank);
        BDTriple t = standard_triple(datum, a, CoeffGroup::q_mod_z());
        sc = construct_square(t, k, n);
        return {true, Json{{"K", jint(sc->K)},
                           {"n_Q", jint(sc->n_Q)},
                           {"copies", 2 * sc->K.convert_to<long long>()},
                           {"output_rank", sc->output.datum.rank()}}};
    });
    if (!sc) {
        for (const char* name : {"minus-copy-isomorphic", "plus-copy-isomorphic",
                                 "cross-form-vanishes", "linking-compatible"})
            doc.results.push_back(
                {name, "fail", Json{{"error", "construction unavailable"}}});
        return;
    }

    SquareReport rep = verify_square_theorem(*sc);
    Json extra{{"alternative_linking_choices", rep.alternative_linking_choices},
               {"notes", rep.notes}};
    run_check(doc, "minus-copy-isomorphic",
              [&]() -> std::pair<bool, Json> { return {rep.minus_iso, Json::object()}; });
    run_check(doc, "plus-copy-isomorphic",
              [&]() -> std::pair<bool, Json> { return {rep.plus_iso, Json::object()}; });
    run_check(doc, "cross-form-vanishes",
              [&]() -> std::pair<bool, Json> { return {rep.cross_zero, Json::object()}; });
    run_check(doc, "linking-compatible",
              [&]() -> std::pair<bool, Json> { return {rep.linking_compatible, extra}; });
}

// ------------------------------------------------------------------ symbols

struct SymbolField {
    std::string name;               // "Q", "Qp:<p>", or "Fq:<q>"
    std::optional<TameLocalField> K;  // absent for the rational Laurent field
};

std::optional<SymbolField> parse_field(const std::string& s, const Int& n) {
    if (s == "Q") return SymbolField{s, std::nullopt};
    if (s.rfind("Qp:", 0) == 0)
        return SymbolField{s, TameLocalField::padic(Int(s.substr(3)), n)};
    if (s.rfind("Fq:", 0) == 0)
        return SymbolField{s, TameLocalField::fq_laurent(std::stol(s.substr(3)), n)};
    return std::nullopt;
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

/// Steinberg relation Res(f, 1-f) = 1 (and (a, 1-a)_n = 1 where tame data
/// exist) on `count` random inputs.  Returns the number verified.
std::size_t steinberg_suite(std::mt19937& rng, const SymbolField& field,
                            std::size_t count, std::size_t& failures) {
    std::size_t prec = default_laurent_precision();
    std::size_t done = 0, attempts = 0;
    while (done < count && attempts < 50 * count) {
        ++attempts;
        try {
            if (!field.K) {  // rational Laurent field
                std::uniform_int_distribution<long> val(-2, 2), num(-5, 5), lead(1, 5);
                std::vector<Rat> c{Rat(lead(rng))};
                for (int i = 0; i < 4; ++i) c.push_back(Rat(num(rng)));
                auto f = LaurentQ::from_coefficients(RatOps{}, val(rng), std::move(c), prec);
                auto g = LaurentQ::constant(RatOps{}, Rat(1), prec) - f;
                if (g.is_zero()) continue;
                if (residue_symbol(f, g) != Rat(1)) ++failures;
                ++done;
            } else if (field.K->kind() == TameLocalField::Kind::FqLaurent) {
                GFqOps ops{field.K->residue_field_ptr()};
                long q = ops.F->q();
                std::uniform_int_distribution<long> val(-2, 2), any(0, q - 1), nz(1, q - 1);
                std::vector<int> c{static_cast<int>(nz(rng))};
                for (int i = 0; i < 4; ++i) c.push_back(static_cast<int>(any(rng)));
                auto f = LaurentF::from_coefficients(ops, val(rng), std::move(c), prec);
                auto g = LaurentF::constant(ops, 1, prec) - f;
                if (g.is_zero()) continue;
                if (residue_symbol(f, g) != 1) ++failures;
                if (tame_hilbert(local_from_series(*field.K, f),
                                 local_from_series(*field.K, g), *field.K)
                        .idx != 0)
                    ++failures;
                ++done;
            } else {  // p-adic
                std::uniform_int_distribution<long> val(-3, 3), u(1, 50);
                Int p = field.K->residue_card();
                Int unit = u(rng);
                while (unit % p == 0) unit = u(rng);
                long v = val(rng);
                Rat a = Rat(unit);
                for (long i = 0; i < v; ++i) a *= Rat(p);
                for (long i = 0; i > v; --i) a /= Rat(p);
                Rat b = Rat(1) - a;
                if (b == 0) continue;
                if (tame_hilbert(local_from_rational(*field.K, a),
                                 local_from_rational(*field.K, b), *field.K)
                        .idx != 0)
                    ++failures;
                ++done;
            }
        } catch (const InsufficientPrecision&) {
            continue;  // 1 - f fell outside the tracked window; redraw
        }
    }
    return done;
}

std::size_t bimultiplicative_suite(std::mt19937& rng, const TameLocalField& K,
                                   std::size_t count, std::size_t& failures) {
    Int n = K.n();
    for (std::size_t t = 0; t < count; ++t) {
        LocalElem a = random_local(rng, K), b = random_local(rng, K),
                  c = random_local(rng, K);
        Int left = tame_hilbert(local_mul(K, a, b), c, K).idx;
        if (left != (tame_hilbert(a, c, K).idx + tame_hilbert(b, c, K).idx) % n)
            ++failures;
        Int right = tame_hilbert(a, local_mul(K, b, c), K).idx;
        if (right != (tame_hilbert(a, b, K).idx + tame_hilbert(a, c, K).idx) % n)
            ++failures;
        if ((tame_hilbert(a, b, K).idx + tame_hilbert(b, a, K).idx) % n != 0)
            ++failures;
    }
    return count;
}

std::size_t torus_commutator_suite(std::mt19937& rng, const TameLocalField& K,
                                   std::size_t forms, std::size_t& failures) {
    CoeffGroup mun = CoeffGroup::mu_n(K.n());
    std::uniform_int_distribution<long> rk(1, 3), entry(-2, 2);
    std::size_t pairs = 0;
    for (std::size_t t = 0; t < forms; ++t) {
        std::size_t r = static_cast<std::size_t>(rk(rng));
        QuadraticForm Q = QuadraticForm::zero(r);
        for (std::size_t i = 0; i < r; ++i) Q.diag[i] = entry(rng);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = i + 1; j < r; ++j) {
                Int e = entry(rng);
                Q.offdiag(i, j) = e;
                Q.offdiag(j, i) = e;
            }
        LocalElem u = random_local(rng, K), v = random_local(rng, K);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j) {
                std::vector<LocalElem> s(r, local_unit(K, 1)), tt(r, local_unit(K, 1));
                s[i] = u;
                tt[j] = v;
                auto x = torus_cover_element(K, CoeffElem::zero(mun), s);
                auto y = torus_cover_element(K, CoeffElem::zero(mun), tt);
                Vec ei(r, 0), ej(r, 0);
                ei[i] = 1;
                ej[j] = 1;
                Int expect = tame_hilbert(u, v, K).idx * eval_B(Q, ei, ej);
                if (!(torus_cover_commutator(x, y, Q) == CoeffElem::residue(mun, expect)))
                    ++failures;
                ++pairs;
            }
    }
    return pairs;
}

void cmd_symbols(ReportDocument& doc, const SymbolField& field, const Int& n,
                 const std::vector<std::string>& hilbert_args, unsigned seed,
                 std::size_t count) {
    if (!hilbert_args.empty()) {
        run_check(doc, "hilbert", [&]() -> std::pair<bool, Json> {
            if (!field.K) throw FieldMismatch("the rational Laurent field has no Hilbert symbol");
            Rat a(hilbert_args[0]), b(hilbert_args[1]);
            auto idx = tame_hilbert(local_from_rational(*field.K, a),
                                    local_from_rational(*field.K, b), *field.K);
            return {true, Json{{"a", hilbert_args[0]},
                               {"b", hilbert_args[1]},
                               {"n", jint(idx.n)},
                               {"index", jint(idx.idx)}}};
        });
        return;
    }

    std::mt19937 rng(seed);
    run_check(doc, "steinberg", [&]() -> std::pair<bool, Json> {
        std::size_t failures = 0;
        std::size_t done = steinberg_suite(rng, field, count, failures);
        return {failures == 0 && done == count,
                Json{{"verified", done}, {"failures", failures}}};
    });

    if (!field.K) {
        skip_check(doc, "bimultiplicative", "no tame symbol on the rational Laurent field");
        skip_check(doc, "torus-commutator", "no tame symbol on the rational Laurent field");
        return;
    }
    run_check(doc, "bimultiplicative", [&]() -> std::pair<bool, Json> {
        std::size_t failures = 0;
        std::size_t done = bimultiplicative_suite(rng, *field.K, count, failures);
        return {failures == 0, Json{{"triples", done}, {"failures", failures}}};
    });
    run_check(doc, "torus-commutator", [&]() -> std::pair<bool, Json> {
        std::size_t failures = 0;
        std::size_t pairs = torus_commutator_suite(rng, *field.K, 3, failures);
        return {failures == 0, Json{{"basis_pairs", pairs}, {"failures", failures}}};
    });
}

// ------------------------------------------------------------------- orbits

void cmd_orbits(ReportDocument& doc, char family, std::size_t m, long q,
                std::size_t k, std::size_t max_states, int jobs) {
    std::optional<DoubleCosetReport> rep;
    run_check(doc, "enumerate", [&]() -> std::pair<bool, Json> {
        rep = enumerate_double_cosets(family, m, q, k, max_states, jobs);
        Json orbits = Json::array();
        for (const auto& o : rep->orbits) {
            Json jo{{"representative", jfqmatrix(o.representative)},
                    {"size", o.size},
                    {"class", o.cls},
                    {"stabilizer_order", o.stabilizer_order},
                    {"n_minus_detected", o.n_minus_detected}};
            orbits.push_back(std::move(jo));
        }
        return {true, Json{{"family", std::string(1, family)},
                           {"m", m},
                           {"k", k},
                           {"q", q},
                           {"total_cosets", rep->total_cosets},
                           {"orbits", std::move(orbits)}}};
    });
    if (!rep) return;

    run_check(doc, "unique-main-orbit", [&]() -> std::pair<bool, Json> {
        std::size_t mains = 0, stab = 0;
        for (const auto& o : rep->orbits)
            if (o.cls == "main") {
                ++mains;
                stab = o.stabilizer_order;
            }
        return {mains == 1, Json{{"main_orbits", mains}, {"stabilizer_order", stab}}};
    });

    run_check(doc, "orbit-sizes-partition", [&]() -> std::pair<bool, Json> {
        std::size_t sum = 0;
        for (const auto& o : rep->orbits) sum += o.size;
        return {sum == rep->total_cosets,
                Json{{"sum", sum}, {"total", rep->total_cosets}}};
    });
}

// ------------------------------------------------------------------- lemmas

Extension random_extension(std::mt19937& rng, const CoeffGroup& mu) {
    std::uniform_int_distribution<std::size_t> rk(1, 3);
    std::uniform_int_distribution<long> res(0, static_cast<long>(mu.order()) - 1);
    std::size_t r = rk(rng);
    Extension::CoeffMatrix K(r, std::vector<CoeffElem>(r, CoeffElem::zero(mu)));
    for (auto& row : K)
        for (auto& e : row) e = CoeffElem::residue(mu, res(rng));
    return Extension(r, mu, std::move(K), CocycleKind::ExplicitTable);
}

void cmd_lemmas(ReportDocument& doc, unsigned seed, long window, int jobs) {
    std::mt19937 rng(seed);

    run_check(doc, "pushout-matches-baer-sum", [&]() -> std::pair<bool, Json> {
        CoeffGroup mu = CoeffGroup::mu_n(12);
        std::uniform_int_distribution<long> mm(0, 5);
        std::size_t failures = 0, grid_points = 0;
        for (int t = 0; t < 10; ++t) {
            Extension E = random_extension(rng, mu);
            Int m = mm(rng);
            Extension push = pushout_m(E, m), baer = baer_sum_n(E, m);
            if (push != baer) ++failures;
            // cross-check the cocycles pointwise on the coordinate window
            std::size_t r = E.rank();
            std::vector<Vec> grid;
            Vec v(r, -window);
            while (true) {
                grid.push_back(v);
                std::size_t i = 0;
                while (i < r && v[i] == window) v[i++] = -window;
                if (i == r) break;
                ++v[i];
            }
            for (const auto& y1 : grid)
                for (const auto& y2 : grid) {
                    ++grid_points;
                    if (push.sigma(y1, y2) != baer.sigma(y1, y2)) ++failures;
                }
        }
        return {failures == 0,
                Json{{"extensions", 10}, {"grid_pairs", grid_points}, {"failures", failures}}};
    });

    run_check(doc, "lift-paths-and-inversion", [&]() -> std::pair<bool, Json> {
        RootDatum datum = build_root_datum(Family::C, 2);
        BDTriple t = standard_triple(datum, 2, CoeffGroup::q_mod_z());
        SQLift lift = sq_extend(t);
        std::size_t coroots = 0, failures = 0;
        for (std::size_t i = 0; i < datum.coroots.size(); ++i) {
            if (!datum.coroot_is_positive(i)) continue;
            ++coroots;
            auto all = lift.values_all_paths(datum.coroots[i]);
            for (const auto& v : all)
                if (!(v.coeff == all[0].coeff) || v.point != all[0].point) ++failures;
            Vec neg = datum.coroots[i];
            for (auto& e : neg) e = -e;
            ExtElement prod = ext_mul(lift.value(neg), lift.value(datum.coroots[i]));
            if (!(prod.coeff == CoeffElem::zero(t.E.coeff())) ||
                prod.point != Vec(datum.rank(), 0))
                ++failures;
        }
        return {failures == 0, Json{{"coroots", coroots}, {"failures", failures}}};
    });

    run_check(doc, "steinberg-residue", [&]() -> std::pair<bool, Json> {
        SymbolField f7{"Fq:7", TameLocalField::fq_laurent(7, 6)};
        std::size_t failures = 0;
        std::size_t done = steinberg_suite(rng, f7, 25, failures);
        return {failures == 0 && done == 25,
                Json{{"verified", done}, {"failures", failures}}};
    });

    run_check(doc, "steinberg-hilbert", [&]() -> std::pair<bool, Json> {
        SymbolField q5{"Qp:5", TameLocalField::padic(5, 4)};
        std::size_t failures = 0;
        std::size_t done = steinberg_suite(rng, q5, 25, failures);
        return {failures == 0 && done == 25,
                Json{{"verified", done}, {"failures", failures}}};
    });

    run_check(doc, "hilbert-bimultiplicative", [&]() -> std::pair<bool, Json> {
        TameLocalField K = TameLocalField::padic(5, 4);
        std::size_t failures = 0;
        std::size_t done = bimultiplicative_suite(rng, K, 25, failures);
        return {failures == 0, Json{{"triples", done}, {"failures", failures}}};
    });

    run_check(doc, "torus-commutator", [&]() -> std::pair<bool, Json> {
        TameLocalField K = TameLocalField::padic(5, 4);
        std::size_t failures = 0;
        std::size_t pairs = torus_commutator_suite(rng, K, 2, failures);
        return {failures == 0, Json{{"basis_pairs", pairs}, {"failures", failures}}};
    });

    run_check(doc, "modular-character-trivial", [&]() -> std::pair<bool, Json> {
        MatrixGroup G = build_group('C', 1, 3);
        DoubledSpace dbl = make_doubled(G.space, 2);
        std::size_t failures = 0;
        for (int t = 0; t < 10; ++t) {
            const FqMatrix& g1 = G.elements[rng() % G.order()];
            const FqMatrix& g2 = G.elements[rng() % G.order()];
            if (modular_character_check(g1, g2, dbl) != 1) ++failures;
        }
        return {failures == 0, Json{{"samples", 10}, {"failures", failures}}};
    });

    run_check(doc, "diagonal-intersection", [&]() -> std::pair<bool, Json> {
        MatrixGroup G = build_group('C', 1, 2);
        DoubledSpace dbl = make_doubled(G.space, 1);
        FqMatrix ref = fq_row_space(dbl.w_delta);
        std::size_t failures = 0;
        for (const auto& g1 : G.elements)
            for (const auto& g2 : G.elements) {
                bool stab = fq_row_space(fq_mul(dbl.w_delta, iota(g1, g2, dbl))) == ref;
                if (stab != (g1 == g2)) ++failures;
            }
        return {failures == 0,
                Json{{"pairs", G.order() * G.order()}, {"failures", failures}}};
    });
    (void)jobs;
}

std::string iso_timestamp() {
    std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

bool ReportDocument::all_pass() const {
    for (const auto& r : results)
        if (r.status == "fail") return false;
    return true;
}

nlohmann::ordered_json ReportDocument::to_json(bool with_timestamp) const {
    Json j{{"command", command}, {"parameters", parameters}};
    if (with_timestamp) j["timestamp"] = timestamp;
    Json rs = Json::array();
    for (const auto& r : results)
        rs.push_back(Json{{"name", r.name}, {"status", r.status}, {"payload", r.payload}});
    j["results"] = std::move(rs);
    return j;
}

std::string ReportDocument::to_tsv() const {
    std::ostringstream out;
    out << "name\tstatus\tpayload\n";
    for (const auto& r : results)
        out << r.name << '\t' << r.status << '\t' << r.payload.dump() << '\n';
    return out.str();
}

int run_command(const std::vector<std::string>& args, ReportDocument& doc,
                std::string* usage_error) {
    doc = ReportDocument{};

    CLI::App app{"exact covering-group data reports"};
    app.require_subcommand(1);
    bool tsv = false;
    unsigned seed = 0;
    int jobs = 1;
    long window = 2;
    std::size_t max_states = 1u << 22;
    app.add_flag("--tsv", tsv, "flatten the report to TSV (handled by the caller)");
    app.add_option("--seed", seed, "PRNG seed for randomized checks");
    app.add_option("--jobs", jobs, "worker threads for parallel sweeps");
    app.add_option("--window", window, "coordinate window for cocycle grids");
    app.add_option("--max-states", max_states, "enumeration size guard");

    std::string family_str = "C", field_str;
    std::size_t rank = 1, m = 1, k = 1;
    long q = 2;
    long long a_ll = 1, n_ll = 1, k_ll = 1;
    std::size_t count = 200;
    std::vector<std::string> hilbert_args;

    CLI::App* c_rootdatum = app.add_subcommand("rootdatum", "build and verify a root datum");
    c_rootdatum->add_option("--family", family_str, "A|B|C|D")->required();
    c_rootdatum->add_option("--rank", rank, "family subscript")->required();

    CLI::App* c_qform = app.add_subcommand("qform", "invariant quadratic form and n_Q");
    c_qform->add_option("--family", family_str, "A|B|C|D")->required();
    c_qform->add_option("--rank", rank, "family subscript")->required();
    c_qform->add_option("--a", a_ll, "form scale parameter")->required();
    c_qform->add_option("--n", n_ll, "cover degree for n_Q");

    CLI::App* c_square = app.add_subcommand("square", "doubling construction and theorem checks");
    c_square->add_option("--family", family_str, "A|B|C|D")->required();
    c_square->add_option("--rank", rank, "family subscript")->required();
    c_square->add_option("--a", a_ll, "form scale parameter")->required();
    c_square->add_option("--k", k_ll, "copy exponent")->required();
    c_square->add_option("--n", n_ll, "cover degree")->required();

    CLI::App* c_symbols = app.add_subcommand("symbols", "residue/Hilbert/torus symbol checks");
    c_symbols->add_option("--field", field_str, "Q | Qp:<p> | Fq:<q>")->required();
    c_symbols->add_option("--n", n_ll, "cover degree");
    c_symbols->add_option("--hilbert", hilbert_args, "two elements to pair")->expected(2);
    c_symbols->add_option("--count", count, "random samples per identity");

    CLI::App* c_orbits = app.add_subcommand("orbits", "double coset orbit report");
    c_orbits->add_option("--family", family_str, "classical family letter");
    c_orbits->add_option("--m", m, "group rank parameter")->required();
    c_orbits->add_option("--k", k, "doubling copies")->required();
    c_orbits->add_option("--q", q, "field size")->required();

    CLI::App* c_lemmas = app.add_subcommand("lemmas", "full identity suite");

    for (CLI::App* sub : {c_rootdatum, c_qform, c_square, c_symbols, c_orbits, c_lemmas})
        sub->fallthrough();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (usage_error) *usage_error = e.what();
        return 2;
    }

    doc.timestamp = iso_timestamp();
    try {
        if (app.got_subcommand(c_rootdatum) || app.got_subcommand(c_qform) ||
            app.got_subcommand(c_square)) {
            auto fam = parse_family(family_str);
            if (!fam) {
                if (usage_error) *usage_error = "unknown family: " + family_str;
                return 2;
            }
            if (app.got_subcommand(c_rootdatum)) {
                doc.command = "rootdatum";
                doc.parameters = Json{{"family", family_str}, {"rank", rank}};
                cmd_rootdatum(doc, *fam, rank);
            } else if (app.got_subcommand(c_qform)) {
                doc.command = "qform";
                doc.parameters =
                    Json{{"family", family_str}, {"rank", rank}, {"a", a_ll}, {"n", n_ll}};
                cmd_qform(doc, *fam, rank, Int(a_ll), Int(n_ll));
            } else {
                doc.command = "square";
                doc.parameters = Json{{"family", family_str},
                                      {"rank", rank},
                                      {"a", a_ll},
                                      {"k", k_ll},
                                      {"n", n_ll}};
                cmd_square(doc, *fam, rank, Int(a_ll), Int(k_ll), Int(n_ll));
            }
        } else if (app.got_subcommand(c_symbols)) {
            doc.command = "symbols";
            doc.parameters = Json{{"field", field_str},
                                  {"n", n_ll},
                                  {"hilbert", hilbert_args},
                                  {"seed", seed},
                                  {"count", count}};
            auto field = parse_field(field_str, Int(n_ll));
            if (!field) {
                if (usage_error) *usage_error = "unknown field descriptor: " + field_str;
                return 2;
            }
            cmd_symbols(doc, *field, Int(n_ll), hilbert_args, seed, count);
        } else if (app.got_subcommand(c_orbits)) {
            doc.command = "orbits";
            doc.parameters = Json{{"family", family_str},
                                  {"m", m},
                                  {"k", k},
                                  {"q", q},
                                  {"max_states", max_states},
                                  {"jobs", jobs}};
            if (family_str.size() != 1) {
                if (usage_error) *usage_error = "family must be one letter";
                return 2;
            }
            cmd_orbits(doc, family_str[0], m, q, k, max_states, jobs);
        } else {
            doc.command = "lemmas";
            doc.parameters = Json{{"seed", seed}, {"window", window}, {"jobs", jobs}};
            cmd_lemmas(doc, seed, window, jobs);
        }
    } catch (const Error& e) {
        doc.results.push_back({"setup", "fail", Json{{"error", e.what()}}});
    }
    return doc.all_pass() ? 0 : 1;
}

}  // namespace bdcover
