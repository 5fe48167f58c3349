#include "bdcover/quadform.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include "bdcover/errors.hpp"

namespace bdcover {

namespace {

// Rational row-reduction nullspace: returns a basis of { u : M u = 0 }.
std::vector<std::vector<Rat>> rat_nullspace(std::vector<std::vector<Rat>> M, std::size_t cols) {
    std::size_t rows = M.size();
    std::vector<std::size_t> pivot_col;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && M[p][c] == 0) ++p;
        if (p == rows) continue;
        std::swap(M[p], M[r]);
        Rat inv = M[r][c];
        for (std::size_t j = c; j < cols; ++j) M[r][j] /= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || M[i][c] == 0) continue;
            Rat f = M[i][c];
            for (std::size_t j = c; j < cols; ++j) M[i][j] -= f * M[r][j];
        }
        pivot_col.push_back(c);
        ++r;
    }
    std::vector<bool> is_pivot(cols, false);
    for (auto c : pivot_col) is_pivot[c] = true;
    std::vector<std::vector<Rat>> basis;
    for (std::size_t f = 0; f < cols; ++f) {
        if (is_pivot[f]) continue;
        std::vector<Rat> v(cols, Rat(0));
        v[f] = 1;
        for (std::size_t i = 0; i < pivot_col.size(); ++i) v[pivot_col[i]] = -M[i][f];
        basis.push_back(std::move(v));
    }
    return basis;
}

std::size_t off_index(std::size_t rank, std::size_t i, std::size_t j) {
    // position of the pair (i<j) after the rank diagonal parameters
    std::size_t idx = rank;
    for (std::size_t a = 0; a < i; ++a) idx += rank - 1 - a;
    return idx + (j - i - 1);
}

std::size_t param_count(std::size_t rank) { return rank + rank * (rank - 1) / 2; }

std::vector<Rat> form_params(const QuadraticForm& Q) {
    std::size_t r = Q.rank();
    std::vector<Rat> u(param_count(r), Rat(0));
    for (std::size_t i = 0; i < r; ++i) u[i] = Rat(Q.diag[i]);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = i + 1; j < r; ++j) u[off_index(r, i, j)] = Rat(Q.offdiag(i, j));
    return u;
}

}  // namespace

QuadraticForm QuadraticForm::zero(std::size_t rank) {
    QuadraticForm q;
    q.lattice = Lattice{rank};
    q.diag.assign(rank, Int(0));
    q.offdiag = IntMatrix(rank, rank);
    return q;
}

QuadraticForm QuadraticForm::diagonal(std::size_t rank, const Int& a) {
    QuadraticForm q = zero(rank);
    for (auto& d : q.diag) d = a;
    return q;
}

Int eval_Q(const QuadraticForm& Q, const Vec& y) {
    if (y.size() != Q.rank()) throw DimensionMismatch("eval_Q: vector size mismatch");
    Int v = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        v += Q.diag[i] * y[i] * y[i];
        for (std::size_t j = i + 1; j < y.size(); ++j) v += Q.offdiag(i, j) * y[i] * y[j];
    }
    return v;
}

Int eval_B(const QuadraticForm& Q, const Vec& y1, const Vec& y2) {
    if (y1.size() != Q.rank() || y2.size() != Q.rank())
        throw DimensionMismatch("eval_B: vector size mismatch");
    Int v = 0;
    for (std::size_t i = 0; i < y1.size(); ++i) {
        v += 2 * Q.diag[i] * y1[i] * y2[i];
        for (std::size_t j = i + 1; j < y1.size(); ++j)
            v += Q.offdiag(i, j) * (y1[i] * y2[j] + y1[j] * y2[i]);
    }
    return v;
}

QuadraticForm pullback_form(const QuadraticForm& Q, const IntMatrix& M) {
    if (M.rows() != Q.rank()) throw DimensionMismatch("pullback_form: matrix rows mismatch");
    std::size_t s = M.cols();
    QuadraticForm out = QuadraticForm::zero(s);
    std::vector<Vec> cols(s, Vec(M.rows(), Int(0)));
    for (std::size_t k = 0; k < s; ++k)
        for (std::size_t i = 0; i < M.rows(); ++i) cols[k][i] = M(i, k);
    for (std::size_t k = 0; k < s; ++k) {
        out.diag[k] = eval_Q(Q, cols[k]);
        for (std::size_t l = k + 1; l < s; ++l) {
            Int b = eval_B(Q, cols[k], cols[l]);
            out.offdiag(k, l) = b;
            out.offdiag(l, k) = b;
        }
    }
    return out;
}

QuadraticForm direct_sum_form(const QuadraticForm& Q1, const QuadraticForm& Q2) {
    std::size_t r1 = Q1.rank(), r2 = Q2.rank();
    QuadraticForm out = QuadraticForm::zero(r1 + r2);
    for (std::size_t i = 0; i < r1; ++i) {
        out.diag[i] = Q1.diag[i];
        for (std::size_t j = 0; j < r1; ++j) out.offdiag(i, j) = Q1.offdiag(i, j);
    }
    for (std::size_t i = 0; i < r2; ++i) {
        out.diag[r1 + i] = Q2.diag[i];
        for (std::size_t j = 0; j < r2; ++j) out.offdiag(r1 + i, r1 + j) = Q2.offdiag(i, j);
    }
    return out;
}

std::vector<std::vector<Rat>> invariant_form_space(const RootDatum& datum,
                                                   bool require_decomposable) {
    std::size_t r = datum.rank();
    std::size_t P = param_count(r);
    std::vector<std::vector<Rat>> rows;
    // Invariance under each simple reflection is a linear condition on the
    // parameter vector: transform the unit-parameter forms and subtract.
    // For the even orthogonal family the solver also imposes the outer
    // sign-flip automorphism (invariance under the full orthogonal group),
    // which only matters in rank two where the root system is reducible.
    std::vector<IntMatrix> gens;
    for (std::size_t s : datum.simple) gens.push_back(datum.reflection_on_Y(s));
    if (datum.family == Family::D) {
        IntMatrix flip = IntMatrix::identity(r);
        flip(r - 1, r - 1) = -1;
        gens.push_back(flip);
    }
    for (const IntMatrix& S : gens) {
        // T(u) = parameters of y -> Q(S y); build T column by column.
        std::vector<std::vector<Rat>> T(P, std::vector<Rat>(P, Rat(0)));
        for (std::size_t p = 0; p < P; ++p) {
            QuadraticForm unit = QuadraticForm::zero(r);
            if (p < r) {
                unit.diag[p] = 1;
            } else {
                for (std::size_t i = 0; i < r; ++i)
                    for (std::size_t j = i + 1; j < r; ++j)
                        if (off_index(r, i, j) == p) {
                            unit.offdiag(i, j) = 1;
                            unit.offdiag(j, i) = 1;
                        }
            }
            auto tp = form_params(pullback_form(unit, S));
            for (std::size_t q = 0; q < P; ++q) T[q][p] = tp[q];
        }
        for (std::size_t q = 0; q < P; ++q) {
            T[q][q] -= 1;
            rows.push_back(T[q]);
        }
    }
    if (require_decomposable) {
        for (std::size_t p = r; p < P; ++p) {
            std::vector<Rat> row(P, Rat(0));
            row[p] = 1;
            rows.push_back(std::move(row));
        }
    }
    if (rows.empty()) rows.emplace_back(P, Rat(0));  // no constraints (torus)
    return rat_nullspace(std::move(rows), P);
}

QuadraticForm weyl_invariant_form(const RootDatum& datum, const Int& a) {
    std::size_t r = datum.rank();
    QuadraticForm Q;
    switch (datum.family) {
        case Family::A:
        case Family::C:
            Q = QuadraticForm::diagonal(r, a);
            break;
        case Family::B:
        case Family::D: {
            if (a % 2 != 0)
                throw ParityViolation("weyl_invariant_form: families B and D need even a, got " +
                                      a.str());
            Q = QuadraticForm::diagonal(r, Int(a / 2));
            break;
        }
    }
    // Cross-check against the solver: the invariant space (with cross terms
    // constrained away for GL) must be a line containing Q.
    auto basis = invariant_form_space(datum, datum.family == Family::A);
    if (basis.size() != 1)
        throw InternalError("weyl_invariant_form: invariant space dimension " +
                            std::to_string(basis.size()));
    auto u = form_params(Q);
    std::size_t lead = 0;
    while (lead < u.size() && basis[0][lead] == 0) ++lead;
    if (lead == u.size() || basis[0][lead] == 0)
        throw InternalError("weyl_invariant_form: degenerate solver basis");
    Rat scale = Rat(u[lead]) / basis[0][lead];
    for (std::size_t p = 0; p < u.size(); ++p)
        if (u[p] != scale * basis[0][p])
            throw InternalError("weyl_invariant_form: canonical form not in solver line");
    // Direct invariance check under every simple reflection.
    for (std::size_t s : datum.simple)
        if (!(pullback_form(Q, datum.reflection_on_Y(s)) == Q))
            throw InternalError("weyl_invariant_form: reflection invariance failed");
    return Q;
}

Int compute_nQ(const Int& n, const QuadraticForm& Q, const RootDatum& datum) {
    if (n < 1) throw ZeroInput("compute_nQ: n must be positive");
    Int val;
    std::size_t m = datum.simple.size();
    if (m == 0) {
        // Torus GL_1 convention: reference value 2a.
        if (Q.rank() == 0) throw ZeroInput("compute_nQ: empty lattice");
        val = 2 * Q.diag[0];
    } else {
        val = eval_Q(Q, datum.coroots[datum.simple[0]]);
        if (m >= 2 && val % 2 != 0)
            throw InternalError("compute_nQ: reference coroot value must be even, got " +
                                val.str());
    }
    Int g = boost::multiprecision::gcd(n, val);
    if (g == 0) return n;  // Q vanishes on the reference coroot
    return n / g;
}

bool is_decomposable(const QuadraticForm& Q, const std::vector<std::size_t>& part) {
    if (part.size() != Q.rank()) throw DimensionMismatch("is_decomposable: partition size");
    for (std::size_t i = 0; i < Q.rank(); ++i)
        for (std::size_t j = i + 1; j < Q.rank(); ++j)
            if (part[i] != part[j] && Q.offdiag(i, j) != 0) return false;
    return true;
}

}  // namespace bdcover
