#include "bdcover/intmat.hpp"

#include <algorithm>

namespace bdcover {

Int IntMatrix::det() const {
    if (rows_ != cols_) throw DimensionMismatch("determinant of non-square matrix");
    const std::size_t n = rows_;
    if (n == 0) return 1;
    // Bareiss fraction-free elimination.
    IntMatrix a = *this;
    Int prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a(k, k) == 0) {
            std::size_t piv = k + 1;
            while (piv < n && a(piv, k) == 0) ++piv;
            if (piv == n) return 0;
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) {
                Int num = a(i, j) * a(k, k) - a(i, k) * a(k, j);
                a(i, j) = num / prev;  // exact by Bareiss
            }
        prev = a(k, k);
    }
    return sign > 0 ? a(n - 1, n - 1) : -a(n - 1, n - 1);
}

std::size_t IntMatrix::rank() const {
    IntMatrix a = *this;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols_ && r < rows_; ++c) {
        std::size_t piv = r;
        while (piv < rows_ && a(piv, c) == 0) ++piv;
        if (piv == rows_) continue;
        for (std::size_t j = 0; j < cols_; ++j) std::swap(a(r, j), a(piv, j));
        for (std::size_t i = r + 1; i < rows_; ++i) {
            if (a(i, c) == 0) continue;
            // integer row elimination by cross-multiplication
            Int f1 = a(r, c), f2 = a(i, c);
            for (std::size_t j = 0; j < cols_; ++j) a(i, j) = a(i, j) * f1 - a(r, j) * f2;
        }
        ++r;
    }
    return r;
}

namespace {

void swap_rows(IntMatrix& m, std::size_t a, std::size_t b) {
    for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(a, j), m(b, j));
}
void swap_cols(IntMatrix& m, std::size_t a, std::size_t b) {
    for (std::size_t i = 0; i < m.rows(); ++i) std::swap(m(i, a), m(i, b));
}
// row[a] += f * row[b]
void add_row(IntMatrix& m, std::size_t a, std::size_t b, const Int& f) {
    for (std::size_t j = 0; j < m.cols(); ++j) m(a, j) += f * m(b, j);
}
void add_col(IntMatrix& m, std::size_t a, std::size_t b, const Int& f) {
    for (std::size_t i = 0; i < m.rows(); ++i) m(i, a) += f * m(i, b);
}
void negate_row(IntMatrix& m, std::size_t a) {
    for (std::size_t j = 0; j < m.cols(); ++j) m(a, j) = -m(a, j);
}

// Quotient rounded to nearest, so |a - q*b| <= |b|/2 (keeps entries small).
Int nearest_quotient(const Int& a, const Int& b) {
    Int q = a / b;
    Int r = a - q * b;
    Int b2 = b < 0 ? -b : b;
    Int r2 = r < 0 ? -r : r;
    if (2 * r2 > b2) q += (r < 0) == (b < 0) ? 1 : -1;
    return q;
}

Int abs_int(const Int& a) { return a < 0 ? -a : a; }

}  // namespace

SmithResult smith_normal_form(const IntMatrix& M) {
    const std::size_t r = M.rows(), c = M.cols();
    SmithResult res{IntMatrix::identity(r), M, IntMatrix::identity(c)};
    IntMatrix& D = res.D;
    IntMatrix& U = res.U;
    IntMatrix& V = res.V;

    const std::size_t n = std::min(r, c);
    for (std::size_t t = 0; t < n; ++t) {
        // Repeatedly move the entry of least absolute value in the trailing
        // block to the pivot and reduce its row and column with
        // nearest-quotient steps; this keeps entries small and converges.
        for (;;) {
            std::size_t pi = t, pj = t;
            bool found = false;
            for (std::size_t i = t; i < r; ++i)
                for (std::size_t j = t; j < c; ++j)
                    if (D(i, j) != 0 &&
                        (!found || abs_int(D(i, j)) < abs_int(D(pi, pj)))) {
                        pi = i;
                        pj = j;
                        found = true;
                    }
            if (!found) break;  // trailing block is zero
            if (pi != t) {
                swap_rows(D, t, pi);
                swap_rows(U, t, pi);
            }
            if (pj != t) {
                swap_cols(D, t, pj);
                swap_cols(V, t, pj);
            }
            bool clean = true;
            for (std::size_t i = t + 1; i < r; ++i) {
                if (D(i, t) == 0) continue;
                Int q = nearest_quotient(D(i, t), D(t, t));
                add_row(D, i, t, -q);
                add_row(U, i, t, -q);
                if (D(i, t) != 0) clean = false;
            }
            for (std::size_t j = t + 1; j < c; ++j) {
                if (D(t, j) == 0) continue;
                Int q = nearest_quotient(D(t, j), D(t, t));
                add_col(D, j, t, -q);
                add_col(V, j, t, -q);
                if (D(t, j) != 0) clean = false;
            }
            if (clean) break;
        }
        if (D(t, t) == 0) break;  // nothing left below this pivot

        // Enforce divisibility d_t | trailing entries: if some D(i,j) is not
        // divisible, fold its column into column t and redo this pivot.
        bool redo = false;
        for (std::size_t i = t + 1; i < r && !redo; ++i)
            for (std::size_t j = t + 1; j < c && !redo; ++j)
                if (D(i, j) % D(t, t) != 0) {
                    add_col(D, t, j, 1);
                    add_col(V, t, j, 1);
                    redo = true;
                }
        if (redo) {
            --t;
            continue;
        }
        if (D(t, t) < 0) {
            negate_row(D, t);
            negate_row(U, t);
        }
    }
    return res;
}

}  // namespace bdcover
