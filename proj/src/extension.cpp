#include "bdcover/extension.hpp"

#include <random>
#include <sstream>

#include "bdcover/errors.hpp"

namespace bdcover {

namespace {

Vec add_vec(const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

Vec neg_vec(const Vec& a) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
    return r;
}

}  // namespace

Extension::Extension(std::size_t rank, CoeffGroup coeff, CoeffMatrix K, CocycleKind kind)
    : rank_(rank), coeff_(coeff), K_(std::move(K)), kind_(kind) {
    if (K_.size() != rank_) throw ShapeMismatch("cocycle matrix row count");
    for (const auto& row : K_) {
        if (row.size() != rank_) throw ShapeMismatch("cocycle matrix column count");
        for (const auto& e : row)
            if (e.group() != coeff_) throw CoeffMismatch("cocycle entry in wrong group");
    }
    // Normalization is structural (bilinear in the coordinates); spot-check
    // the cocycle identity on random window points anyway.
    Vec zero(rank_, Int(0));
    std::mt19937 rng(12345);
    std::uniform_int_distribution<long> dist(-2, 2);
    int samples = rank_ <= 6 ? 40 : 10;
    for (int t = 0; t < samples; ++t) {
        Vec y1(rank_), y2(rank_), y3(rank_);
        for (std::size_t i = 0; i < rank_; ++i) {
            y1[i] = dist(rng);
            y2[i] = dist(rng);
            y3[i] = dist(rng);
        }
        if (!(sigma(zero, y1).is_zero() && sigma(y1, zero).is_zero()))
            throw InternalError("cocycle not normalized");
        CoeffElem lhs = sigma(y1, y2) + sigma(add_vec(y1, y2), y3);
        CoeffElem rhs = sigma(y2, y3) + sigma(y1, add_vec(y2, y3));
        if (lhs != rhs) throw InternalError("cocycle identity failed");
    }
}

Extension Extension::standard_from_q(const QuadraticForm& Q, const CoeffGroup& coeff) {
    std::size_t r = Q.rank();
    CoeffMatrix K(r, std::vector<CoeffElem>(r, CoeffElem::zero(coeff)));
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < i; ++j)
            // (-1)^{B_ij}: only demand an element of order two when a cross
            // term is actually odd, so groups of odd order stay usable with
            // even polarizations.
            K[i][j] = CoeffElem::sign_power(coeff, Q.offdiag(i, j));
    Extension E(r, coeff, std::move(K), CocycleKind::StandardFromQ);
    // The commutator of lifts must realize the polarization sign.
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) {
            Vec ei(r, Int(0)), ej(r, Int(0));
            ei[i] = 1;
            ej[j] = 1;
            if (E.commutator_value(ei, ej) != CoeffElem::sign_power(coeff, eval_B(Q, ei, ej)))
                throw InternalError("standard cocycle commutator mismatch");
        }
    return E;
}

Extension Extension::split(std::size_t rank, const CoeffGroup& coeff) {
    return Extension(rank, coeff,
                     CoeffMatrix(rank, std::vector<CoeffElem>(rank, CoeffElem::zero(coeff))),
                     CocycleKind::Derived);
}

CoeffElem Extension::sigma(const Vec& y1, const Vec& y2) const {
    if (y1.size() != rank_ || y2.size() != rank_)
        throw DimensionMismatch("sigma: vector size mismatch");
    CoeffElem acc = CoeffElem::zero(coeff_);
    for (std::size_t i = 0; i < rank_; ++i) {
        if (y1[i] == 0) continue;
        for (std::size_t j = 0; j < rank_; ++j) {
            if (y2[j] == 0 || K_[i][j].is_zero()) continue;
            acc = acc + K_[i][j].times(y1[i] * y2[j]);
        }
    }
    return acc;
}

CoeffElem Extension::commutator_value(const Vec& y1, const Vec& y2) const {
    return sigma(y1, y2) - sigma(y2, y1);
}

ExtElement ext_identity(const Extension& E) {
    return ExtElement{E, CoeffElem::zero(E.coeff()), Vec(E.rank(), Int(0))};
}

ExtElement ext_element(const Extension& E, const CoeffElem& c, Vec y) {
    if (c.group() != E.coeff()) throw CoeffMismatch("ext_element coefficient group");
    if (y.size() != E.rank()) throw DimensionMismatch("ext_element point size");
    return ExtElement{E, c, std::move(y)};
}

ExtElement ext_mul(const ExtElement& x, const ExtElement& y) {
    if (x.ext != y.ext) throw ExtensionMismatch("ext_mul: different extensions");
    return ExtElement{x.ext, x.coeff + y.coeff + x.ext.sigma(x.point, y.point),
                      add_vec(x.point, y.point)};
}

ExtElement ext_inv(const ExtElement& x) {
    Vec ny = neg_vec(x.point);
    // (c,y)^{-1} = (-c - sigma(y,-y), -y)
    return ExtElement{x.ext, -x.coeff - x.ext.sigma(x.point, ny), std::move(ny)};
}

ExtElement ext_pow(const ExtElement& x, const Int& n) {
    if (n < 0) return ext_pow(ext_inv(x), -n);
    ExtElement acc = ext_identity(x.ext);
    for (Int i = 0; i < n; ++i) acc = ext_mul(acc, x);
    return acc;
}

CoeffElem ext_commutator(const ExtElement& x, const ExtElement& y) {
    if (x.ext != y.ext) throw ExtensionMismatch("ext_commutator: different extensions");
    return x.ext.commutator_value(x.point, y.point);
}

Extension pushout_m(const Extension& E, const Int& m) {
    Extension::CoeffMatrix K = E.table();
    for (auto& row : K)
        for (auto& e : row) e = e.times(m);
    return Extension(E.rank(), E.coeff(), std::move(K), CocycleKind::Derived);
}

Extension pullback_ext(const Extension& E, const LatticeHom& h) {
    if (h.target.rank != E.rank()) throw DimensionMismatch("pullback_ext: target rank");
    std::size_t s = h.source.rank;
    Extension::CoeffMatrix K(s, std::vector<CoeffElem>(s, CoeffElem::zero(E.coeff())));
    const auto& M = h.matrix;
    for (std::size_t a = 0; a < s; ++a)
        for (std::size_t b = 0; b < s; ++b) {
            CoeffElem acc = CoeffElem::zero(E.coeff());
            for (std::size_t i = 0; i < E.rank(); ++i) {
                if (M(i, a) == 0) continue;
                for (std::size_t j = 0; j < E.rank(); ++j) {
                    if (M(j, b) == 0) continue;
                    acc = acc + E.table()[i][j].times(M(i, a) * M(j, b));
                }
            }
            K[a][b] = acc;
        }
    return Extension(s, E.coeff(), std::move(K), CocycleKind::Derived);
}

Extension pr_star(const Extension& E1, const Extension& E2) {
    if (E1.coeff() != E2.coeff()) throw CoeffMismatch("pr_star: coefficient groups differ");
    std::size_t r1 = E1.rank(), r2 = E2.rank();
    Extension::CoeffMatrix K(r1 + r2,
                             std::vector<CoeffElem>(r1 + r2, CoeffElem::zero(E1.coeff())));
    for (std::size_t i = 0; i < r1; ++i)
        for (std::size_t j = 0; j < r1; ++j) K[i][j] = E1.table()[i][j];
    for (std::size_t i = 0; i < r2; ++i)
        for (std::size_t j = 0; j < r2; ++j) K[r1 + i][r1 + j] = E2.table()[i][j];
    return Extension(r1 + r2, E1.coeff(), std::move(K), CocycleKind::Derived);
}

Extension baer_sum_n(const Extension& E, const Int& n) {
    if (n < 0) throw ZeroInput("baer_sum_n: n must be nonnegative");
    if (n == 0) return Extension::split(E.rank(), E.coeff());  // empty sum
    // pr_* of n block copies, pulled back along the diagonal embedding.
    Extension blocks = E;
    for (Int i = 1; i < n; ++i) blocks = pr_star(blocks, E);
    std::size_t r = E.rank();
    std::size_t copies = n.convert_to<std::size_t>();
    IntMatrix diag(r * copies, r);
    for (std::size_t c = 0; c < copies; ++c)
        for (std::size_t i = 0; i < r; ++i) diag(c * r + i, i) = 1;
    return pullback_ext(blocks, LatticeHom(Lattice{r}, Lattice{r * copies}, diag));
}

PrStarElement prstar_element(const Extension& E1, const Extension& E2, const CoeffElem& x,
                             const ExtElement& e1, const ExtElement& e2) {
    if (e1.ext != E1 || e2.ext != E2)
        throw ExtensionMismatch("prstar_element: components from wrong extensions");
    if (x.group() != E1.coeff()) throw CoeffMismatch("prstar_element coefficient");
    return PrStarElement{E1, E2, x + e1.coeff + e2.coeff, e1.point, e2.point};
}

bool prstar_equal(const PrStarElement& a, const PrStarElement& b) {
    return a.parent1 == b.parent1 && a.parent2 == b.parent2 && a.coeff == b.coeff &&
           a.y1 == b.y1 && a.y2 == b.y2;
}

PrStarElement prstar_mul(const PrStarElement& a, const PrStarElement& b) {
    if (a.parent1 != b.parent1 || a.parent2 != b.parent2)
        throw ExtensionMismatch("prstar_mul: parents differ");
    return PrStarElement{a.parent1, a.parent2,
                         a.coeff + b.coeff + a.parent1.sigma(a.y1, b.y1) +
                             a.parent2.sigma(a.y2, b.y2),
                         add_vec(a.y1, b.y1), add_vec(a.y2, b.y2)};
}

PrStarElement prstar_inv(const PrStarElement& a) {
    Vec n1 = neg_vec(a.y1), n2 = neg_vec(a.y2);
    return PrStarElement{a.parent1, a.parent2,
                         -a.coeff - a.parent1.sigma(a.y1, n1) - a.parent2.sigma(a.y2, n2),
                         std::move(n1), std::move(n2)};
}

ExtElement mul_map(const PrStarElement& p) {
    if (p.parent1 != p.parent2) throw ParentsDiffer("mul_map needs equal parents");
    return ExtElement{p.parent1, p.coeff + p.parent1.sigma(p.y1, p.y2),
                      add_vec(p.y1, p.y2)};
}

Extension twisted_product_ext(const Extension& E1, const Extension& E2,
                              const QuadraticForm& Q_square) {
    if (E1.coeff() != E2.coeff()) throw CoeffMismatch("twisted_product_ext: groups differ");
    std::size_t r1 = E1.rank(), r2 = E2.rank();
    std::size_t R = r1 + r2 + 1;
    if (Q_square.rank() != R)
        throw DimensionMismatch("twisted_product_ext: form rank must cover the extra line");
    CoeffElem half = CoeffElem::minus_one(E1.coeff());
    Extension base = pr_star(E1, E2);
    Extension::CoeffMatrix K(R, std::vector<CoeffElem>(R, CoeffElem::zero(E1.coeff())));
    for (std::size_t i = 0; i < r1 + r2; ++i)
        for (std::size_t j = 0; j < r1 + r2; ++j) K[i][j] = base.table()[i][j];
    // Twist: left factor's (y1, y2) against the right factor's extra
    // coordinate, through the polarization of Q_square.
    for (std::size_t i = 0; i < r1 + r2; ++i)
        K[i][R - 1] = K[i][R - 1] + half.times(Q_square.offdiag(i, R - 1));
    return Extension(R, E1.coeff(), std::move(K), CocycleKind::TwistedProduct);
}

CoeffElem iso_beta_eval(const IsoWitness& w, const Vec& y) {
    std::size_t r = w.S.size();
    if (y.size() != r) throw DimensionMismatch("iso_beta_eval size");
    CoeffElem acc = CoeffElem::zero(w.chi.group);
    for (std::size_t i = 0; i < r; ++i) {
        acc = acc + w.S[i][i].times(y[i] * (y[i] - 1) / 2);
        for (std::size_t j = i + 1; j < r; ++j) acc = acc + w.S[i][j].times(y[i] * y[j]);
    }
    return acc;
}

ExtElement iso_apply(const IsoWitness& w, const Extension& target, const ExtElement& x) {
    return ExtElement{target, x.coeff + iso_beta_eval(w, x.point) + w.chi.eval(x.point),
                      x.point};
}

std::optional<IsoWitness> iso_extensions(const Extension& E, const Extension& Eprime,
                                         const std::vector<CoeffElem>& f_values,
                                         const std::vector<CoeffElem>& fprime_values,
                                         const LatticeHom& sc_incl) {
    if (E.rank() != Eprime.rank() || E.coeff() != Eprime.coeff())
        throw ExtensionMismatch("iso_extensions: incompatible extensions");
    if (sc_incl.target.rank != E.rank()) throw DimensionMismatch("iso_extensions: sc lattice");
    if (f_values.size() != sc_incl.source.rank || fprime_values.size() != sc_incl.source.rank)
        throw DimensionMismatch("iso_extensions: f-table size");
    std::size_t r = E.rank();
    // Difference of the cocycles must be a coboundary, i.e. symmetric
    // (equivalently, the commutator maps agree).
    Extension::CoeffMatrix S(r, std::vector<CoeffElem>(r, CoeffElem::zero(E.coeff())));
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) S[i][j] = Eprime.table()[i][j] - E.table()[i][j];
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = i + 1; j < r; ++j)
            if (S[i][j] != S[j][i]) return std::nullopt;
    IsoWitness w{S, Character{Lattice{r}, E.coeff(),
                              std::vector<CoeffElem>(r, CoeffElem::zero(E.coeff()))}};
    // Character fixing the discrepancy on the sub-lattice basis images.
    std::vector<CoeffElem> disc;
    for (std::size_t k = 0; k < sc_incl.source.rank; ++k) {
        Vec ek(sc_incl.source.rank, Int(0));
        ek[k] = 1;
        Vec img = sc_incl.apply(ek);
        disc.push_back(fprime_values[k] - f_values[k] - iso_beta_eval(w, img));
    }
    // When the sub-lattice does not span rationally (e.g. the semisimple part
    // of a reductive lattice), complete it to finite index with standard
    // basis vectors, imposing the zero value on the appended generators.
    LatticeHom sub = sc_incl;
    while (sub.matrix.rank() < r) {
        std::size_t extra = 0;
        IntMatrix probe(r, sub.source.rank + 1);
        for (; extra < r; ++extra) {
            for (std::size_t i = 0; i < r; ++i) {
                for (std::size_t j = 0; j < sub.source.rank; ++j) probe(i, j) = sub.matrix(i, j);
                probe(i, sub.source.rank) = i == extra ? 1 : 0;
            }
            if (probe.rank() > sub.matrix.rank()) break;
        }
        if (extra == r) throw InternalError("cannot complete sub-lattice to full rank");
        sub = LatticeHom(Lattice{sub.source.rank + 1}, Lattice{r}, probe);
        disc.push_back(CoeffElem::zero(E.coeff()));
    }
    auto chi = extend_character(sub, Character{sub.source, E.coeff(), disc}, Lattice{r});
    if (!chi) return std::nullopt;
    w.chi = *chi;
    return w;
}

std::string cocycle_table_tsv(const Extension& E, long window) {
    std::size_t r = E.rank();
    std::vector<Vec> pts;
    Vec cur(r, Int(-window));
    while (true) {
        pts.push_back(cur);
        std::size_t i = 0;
        while (i < r && cur[i] == window) cur[i++] = -window;
        if (i == r) break;
        cur[i] += 1;
    }
    std::ostringstream out;
    out << "y1\ty2\tvalue\n";
    auto fmt = [](const Vec& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) s += ",";
            s += v[i].str();
        }
        return s;
    };
    for (const auto& a : pts)
        for (const auto& b : pts)
            out << fmt(a) << '\t' << fmt(b) << '\t' << E.sigma(a, b).describe() << '\n';
    return out.str();
}

}  // namespace bdcover
