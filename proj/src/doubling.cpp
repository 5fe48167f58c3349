#include "bdcover/doubling.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace bdcover {

namespace {

const GFq& fld(const FqMatrix& a) { return *a.field(); }

void check_same_field(const FqMatrix& a, const FqMatrix& b) {
    if (!a.field() || !b.field() || *a.field() != *b.field())
        throw FieldMismatch("matrices over different finite fields");
}

}  // namespace

FqMatrix FqMatrix::identity(std::shared_ptr<const GFq> F, std::size_t n) {
    FqMatrix m(std::move(F), n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

std::string FqMatrix::describe() const {
    std::ostringstream out;
    out << "[";
    for (std::size_t i = 0; i < rows_; ++i) {
        if (i) out << "; ";
        for (std::size_t j = 0; j < cols_; ++j) {
            if (j) out << " ";
            out << at(i, j);
        }
    }
    out << "]";
    return out.str();
}

FqMatrix fq_mul(const FqMatrix& a, const FqMatrix& b) {
    check_same_field(a, b);
    if (a.cols() != b.rows()) throw ShapeMismatch("matrix product shapes");
    const GFq& F = fld(a);
    FqMatrix out(a.field(), a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t l = 0; l < a.cols(); ++l) {
            int x = a.at(i, l);
            if (x == 0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j)
                out.at(i, j) = F.add(out.at(i, j), F.mul(x, b.at(l, j)));
        }
    return out;
}

FqMatrix fq_add(const FqMatrix& a, const FqMatrix& b) {
    check_same_field(a, b);
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw ShapeMismatch("matrix sum shapes");
    const GFq& F = fld(a);
    FqMatrix out = a;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            out.at(i, j) = F.add(out.at(i, j), b.at(i, j));
    return out;
}

FqMatrix fq_sub(const FqMatrix& a, const FqMatrix& b) {
    check_same_field(a, b);
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw ShapeMismatch("matrix difference shapes");
    const GFq& F = fld(a);
    FqMatrix out = a;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            out.at(i, j) = F.sub(out.at(i, j), b.at(i, j));
    return out;
}

FqMatrix fq_transpose(const FqMatrix& a) {
    FqMatrix out(a.field(), a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out.at(j, i) = a.at(i, j);
    return out;
}

namespace {

// In-place reduced row echelon form; returns pivot column per pivot row.
std::vector<std::size_t> rref(FqMatrix& m) {
    const GFq& F = fld(m);
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::size_t sel = row;
        while (sel < m.rows() && m.at(sel, col) == 0) ++sel;
        if (sel == m.rows()) continue;
        for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m.at(row, j), m.at(sel, j));
        int inv = F.inv(m.at(row, col));
        for (std::size_t j = 0; j < m.cols(); ++j) m.at(row, j) = F.mul(m.at(row, j), inv);
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == row || m.at(i, col) == 0) continue;
            int c = m.at(i, col);
            for (std::size_t j = 0; j < m.cols(); ++j)
                m.at(i, j) = F.sub(m.at(i, j), F.mul(c, m.at(row, j)));
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

}  // namespace

FqMatrix fq_row_space(const FqMatrix& a) {
    FqMatrix m = a;
    auto pivots = rref(m);
    FqMatrix out(a.field(), pivots.size(), a.cols());
    for (std::size_t i = 0; i < pivots.size(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out.at(i, j) = m.at(i, j);
    return out;
}

std::size_t fq_rank(const FqMatrix& a) {
    FqMatrix m = a;
    return rref(m).size();
}

int fq_det(const FqMatrix& a) {
    if (a.rows() != a.cols()) throw ShapeMismatch("determinant of non-square matrix");
    const GFq& F = fld(a);
    FqMatrix m = a;
    int det = 1;
    std::size_t n = m.rows();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t sel = col;
        while (sel < n && m.at(sel, col) == 0) ++sel;
        if (sel == n) return 0;
        if (sel != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m.at(col, j), m.at(sel, j));
            det = F.neg(det);
        }
        det = F.mul(det, m.at(col, col));
        int inv = F.inv(m.at(col, col));
        for (std::size_t i = col + 1; i < n; ++i) {
            if (m.at(i, col) == 0) continue;
            int c = F.mul(m.at(i, col), inv);
            for (std::size_t j = col; j < n; ++j)
                m.at(i, j) = F.sub(m.at(i, j), F.mul(c, m.at(col, j)));
        }
    }
    return det;
}

bool fq_invertible(const FqMatrix& a) {
    return a.rows() == a.cols() && fq_rank(a) == a.rows();
}

FqMatrix fq_inverse(const FqMatrix& a) {
    if (a.rows() != a.cols()) throw ShapeMismatch("inverse of non-square matrix");
    std::size_t n = a.rows();
    FqMatrix aug(a.field(), n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug.at(i, j) = a.at(i, j);
        aug.at(i, n + i) = 1;
    }
    auto pivots = rref(aug);
    if (pivots.size() != n || pivots.back() != n - 1)
        throw NotInGroup("matrix is singular");
    FqMatrix out(a.field(), n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out.at(i, j) = aug.at(i, n + j);
    return out;
}

std::vector<int> fq_solve_row(const FqMatrix& a, const std::vector<int>& b) {
    // Solve x a = b: transpose to a^T x^T = b^T and eliminate.
    if (b.size() != a.cols()) throw ShapeMismatch("solve dimensions");
    const GFq& F = fld(a);
    FqMatrix aug(a.field(), a.cols(), a.rows() + 1);
    for (std::size_t i = 0; i < a.cols(); ++i) {
        for (std::size_t j = 0; j < a.rows(); ++j) aug.at(i, j) = a.at(j, i);
        aug.at(i, a.rows()) = b[i];
    }
    auto pivots = rref(aug);
    std::vector<int> x(a.rows(), 0);
    for (std::size_t r = 0; r < pivots.size(); ++r) {
        if (pivots[r] == a.rows()) throw ShapeMismatch("inconsistent linear system");
        x[pivots[r]] = aug.at(r, a.rows());
    }
    // verify (rank-deficient systems)
    for (std::size_t j = 0; j < a.cols(); ++j) {
        int acc = 0;
        for (std::size_t i = 0; i < a.rows(); ++i) acc = F.add(acc, F.mul(x[i], a.at(i, j)));
        if (acc != b[j]) throw ShapeMismatch("inconsistent linear system");
    }
    return x;
}

bool fq_in_row_space(const FqMatrix& a, const std::vector<int>& v) {
    try {
        fq_solve_row(a, v);
        return true;
    } catch (const ShapeMismatch&) {
        return false;
    }
}

namespace {

/// Basis rows of the right nullspace {v : M v = 0}.
FqMatrix right_nullspace(const FqMatrix& m) {
    const GFq& F = fld(m);
    FqMatrix r = m;
    auto pivots = rref(r);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto p : pivots) is_pivot[p] = true;
    std::vector<std::size_t> free_cols;
    for (std::size_t j = 0; j < m.cols(); ++j)
        if (!is_pivot[j]) free_cols.push_back(j);
    FqMatrix out(m.field(), free_cols.size(), m.cols());
    for (std::size_t fi = 0; fi < free_cols.size(); ++fi) {
        out.at(fi, free_cols[fi]) = 1;
        for (std::size_t r_i = 0; r_i < pivots.size(); ++r_i)
            out.at(fi, pivots[r_i]) = F.neg(r.at(r_i, free_cols[fi]));
    }
    return out;
}

}  // namespace

FqMatrix fq_intersect_row_spaces(const FqMatrix& a, const FqMatrix& b) {
    check_same_field(a, b);
    if (a.cols() != b.cols()) throw ShapeMismatch("intersection ambient dimensions");
    const GFq& F = fld(a);
    // Combinations (u, v) with u a + v b = 0 give intersection vectors u a.
    FqMatrix stacked(a.field(), a.cols(), a.rows() + b.rows());
    for (std::size_t j = 0; j < a.cols(); ++j) {
        for (std::size_t i = 0; i < a.rows(); ++i) stacked.at(j, i) = a.at(i, j);
        for (std::size_t i = 0; i < b.rows(); ++i) stacked.at(j, a.rows() + i) = b.at(i, j);
    }
    FqMatrix combos = right_nullspace(stacked);
    FqMatrix vecs(a.field(), combos.rows(), a.cols());
    for (std::size_t r = 0; r < combos.rows(); ++r)
        for (std::size_t i = 0; i < a.rows(); ++i) {
            int c = combos.at(r, i);
            if (c == 0) continue;
            for (std::size_t j = 0; j < a.cols(); ++j)
                vecs.at(r, j) = F.add(vecs.at(r, j), F.mul(c, a.at(i, j)));
        }
    return fq_row_space(vecs);
}

// --- groups -------------------------------------------------------------

bool preserves_form(const FormedSpace& space, const FqMatrix& g) {
    if (g.rows() != space.dim || g.cols() != space.dim) return false;
    if (space.epsilon == 0) return fq_invertible(g);
    return fq_mul(fq_mul(g, space.form), fq_transpose(g)) == space.form;
}

bool MatrixGroup::contains(const FqMatrix& g) const {
    if (!preserves_form(space, g)) return false;
    if ((family == 'B' || family == 'D') && fq_det(g) != 1) return false;
    return true;
}

namespace {

FormedSpace standard_space(char family, std::size_t m, std::shared_ptr<const GFq> F) {
    std::size_t n;
    int eps;
    switch (family) {
        case 'A': n = m; eps = 0; break;
        case 'B': n = 2 * m + 1; eps = 1; break;
        case 'C': n = 2 * m; eps = -1; break;
        case 'D': n = 2 * m; eps = 1; break;
        default: throw UnsupportedFamily(std::string("family ") + family);
    }
    FqMatrix form(F, eps == 0 ? 0 : n, eps == 0 ? 0 : n);
    if (eps == 1) {
        for (std::size_t i = 0; i < n; ++i) form.at(i, n - 1 - i) = 1;
    } else if (eps == -1) {
        for (std::size_t i = 0; i < m; ++i) {
            form.at(i, n - 1 - i) = 1;
            form.at(n - 1 - i, i) = F->neg(1);
        }
    }
    return FormedSpace{std::move(F), n, std::move(form), eps};
}

std::size_t classical_order(char family, std::size_t m, long q) {
    auto p2 = [&](std::size_t e) {
        std::size_t r = 1;
        for (std::size_t i = 0; i < e; ++i) r *= static_cast<std::size_t>(q);
        return r;
    };
    std::size_t ord = 1;
    switch (family) {
        case 'A':
            for (std::size_t i = 0; i < m; ++i) ord *= p2(m) - p2(i);
            return ord;
        case 'B':
        case 'C':
            ord = p2(m * m);
            for (std::size_t i = 1; i <= m; ++i) ord *= p2(2 * i) - 1;
            return ord;
        case 'D':
            ord = p2(m * (m - 1)) * (p2(m) - 1);
            for (std::size_t i = 1; i + 1 <= m; ++i) ord *= p2(2 * i) - 1;
            return ord;
        default:
            throw UnsupportedFamily(std::string("family ") + family);
    }
}

std::set<FqMatrix> closure(const std::vector<FqMatrix>& gens, std::size_t n,
                           const std::shared_ptr<const GFq>& F) {
    std::set<FqMatrix> seen;
    std::vector<FqMatrix> frontier{FqMatrix::identity(F, n)};
    seen.insert(frontier[0]);
    while (!frontier.empty()) {
        std::vector<FqMatrix> next;
        for (const auto& x : frontier)
            for (const auto& g : gens) {
                FqMatrix y = fq_mul(x, g);
                if (seen.insert(y).second) next.push_back(y);
            }
        frontier = std::move(next);
    }
    return seen;
}

}  // namespace

MatrixGroup build_group(char family, std::size_t m, long q, std::size_t max_states) {
    if (m == 0) throw UnsupportedFamily("rank parameter must be positive");
    auto F = std::make_shared<const GFq>(q);
    if ((family == 'B' || family == 'D') && q % 2 == 0)
        throw UnsupportedFamily("orthogonal families need odd q");
    FormedSpace space = standard_space(family, m, F);
    std::size_t n = space.dim;

    double states = 1;
    for (std::size_t i = 0; i < n * n; ++i) {
        states *= q;
        if (states > static_cast<double>(max_states))
            throw TooLarge("matrix state space exceeds the enumeration bound");
    }

    std::vector<FqMatrix> elements;
    std::size_t total = static_cast<std::size_t>(states);
    FqMatrix g(F, n, n);
    for (std::size_t code = 0; code < total; ++code) {
        std::size_t c = code;
        for (std::size_t idx = 0; idx < n * n; ++idx) {
            g.at(idx / n, idx % n) = static_cast<int>(c % q);
            c /= q;
        }
        if (!preserves_form(space, g)) continue;
        if ((family == 'B' || family == 'D') && fq_det(g) != 1) continue;
        if (family == 'A' && !fq_invertible(g)) continue;
        elements.push_back(g);
    }
    std::sort(elements.begin(), elements.end());

    if (elements.size() != classical_order(family, m, q))
        throw InternalError("group enumeration disagrees with the order formula");

    std::vector<FqMatrix> gens;
    std::set<FqMatrix> closed{FqMatrix::identity(F, n)};
    for (const auto& e : elements) {
        if (closed.count(e)) continue;
        gens.push_back(e);
        closed = closure(gens, n, F);
        if (closed.size() == elements.size()) break;
    }
    if (closed.size() != elements.size())
        throw InternalError("generating set closure mismatch");

    return MatrixGroup{family, m, std::move(space), std::move(elements), std::move(gens)};
}

// --- doubled space ---------------------------------------------------------

DoubledSpace make_doubled(const FormedSpace& base, std::size_t k) {
    if (base.epsilon == 0)
        throw UnsupportedFamily("doubling needs a formed (non-GL) space");
    if (k == 0) throw ShapeMismatch("k must be positive");
    const auto& F = base.F;
    std::size_t n = base.dim, N = 2 * k * n;
    FqMatrix form(F, N, N);
    for (std::size_t b = 0; b < 2 * k; ++b)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                int v = base.form.at(i, j);
                form.at(b * n + i, b * n + j) = b < k ? v : F->neg(v);
            }

    // Copy i (1-based): plus block i-1, minus block 2k-i.
    auto delta_row = [&](std::size_t copy, std::size_t j) {
        std::vector<int> row(N, 0);
        row[(copy - 1) * n + j] = 1;
        row[(2 * k - copy) * n + j] = 1;
        return row;
    };
    auto nabla_row = [&](std::size_t copy, std::size_t j) {
        std::vector<int> row(N, 0);
        row[(copy - 1) * n + j] = 1;
        row[(2 * k - copy) * n + j] = F->neg(1);
        return row;
    };

    FqMatrix w_delta(F, k * n, N);
    for (std::size_t copy = 1; copy <= k; ++copy)
        for (std::size_t j = 0; j < n; ++j) {
            auto row = delta_row(copy, j);
            for (std::size_t c = 0; c < N; ++c) w_delta.at((copy - 1) * n + j, c) = row[c];
        }

    // Y_t spans nabla copies k-t+1, ..., k; rows grouped newest copy first.
    std::vector<FqMatrix> flag;
    for (std::size_t t = 1; t + 1 <= k; ++t) {
        FqMatrix y(F, t * n, N);
        for (std::size_t s = 0; s < t; ++s) {
            std::size_t copy = k - t + 1 + s;
            for (std::size_t j = 0; j < n; ++j) {
                auto row = nabla_row(copy, j);
                for (std::size_t c = 0; c < N; ++c) y.at(s * n + j, c) = row[c];
            }
        }
        flag.push_back(std::move(y));
    }

    // Y_k = Y_{k-1} + W_1^square.
    FqMatrix yk(F, (k - 1) * n + 2 * n, N);
    if (k >= 2)
        for (std::size_t i = 0; i < (k - 1) * n; ++i)
            for (std::size_t c = 0; c < N; ++c) yk.at(i, c) = flag.back().at(i, c);
    for (std::size_t j = 0; j < n; ++j) {
        yk.at((k - 1) * n + j, j) = 1;                              // x_1 block
        yk.at((k - 1) * n + n + j, (2 * k - 1) * n + j) = 1;        // y_1 block
    }

    return DoubledSpace{base, k, FormedSpace{F, N, std::move(form), base.epsilon},
                        std::move(w_delta), std::move(flag), std::move(yk)};
}

FqMatrix iota(const FqMatrix& g1, const FqMatrix& g2, const DoubledSpace& dbl) {
    if (!preserves_form(dbl.base, g1) || !preserves_form(dbl.base, g2))
        throw NotInGroup("iota arguments must preserve the base form");
    std::size_t n = dbl.base.dim, k = dbl.k, N = 2 * k * n;
    FqMatrix out(dbl.base.F, N, N);
    for (std::size_t b = 0; b < 2 * k; ++b) {
        const FqMatrix& g = (b == 2 * k - 1) ? g2 : g1;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) out.at(b * n + i, b * n + j) = g.at(i, j);
    }
    if (!preserves_form(dbl.total, out))
        throw InternalError("iota image does not preserve the doubled form");
    return out;
}

namespace {

std::vector<int> row_of(const FqMatrix& m, std::size_t i) {
    std::vector<int> r(m.cols());
    for (std::size_t j = 0; j < m.cols(); ++j) r[j] = m.at(i, j);
    return r;
}

std::vector<int> act_row(const std::vector<int>& v, const FqMatrix& g) {
    const GFq& F = fld(g);
    std::vector<int> out(g.cols(), 0);
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] == 0) continue;
        for (std::size_t j = 0; j < g.cols(); ++j)
            out[j] = F.add(out[j], F.mul(v[i], g.at(i, j)));
    }
    return out;
}

std::vector<int> sub_rows(const GFq& F, const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = F.sub(a[i], b[i]);
    return out;
}

bool is_zero_row(const std::vector<int>& v) {
    return std::all_of(v.begin(), v.end(), [](int x) { return x == 0; });
}

}  // namespace

int psi_argument(const FqMatrix& u, const DoubledSpace& dbl) {
    const GFq& F = *dbl.base.F;
    if (!preserves_form(dbl.total, u))
        throw NotInGroup("psi argument must be an isometry of the doubled space");
    std::size_t n = dbl.base.dim, k = dbl.k, N = 2 * k * n;

    // Flag triviality: Y_t u - Y_t in Y_{t-1}, and Y_k u - Y_k in Y_{k-1}.
    for (std::size_t t = 1; t + 1 <= k; ++t) {
        const FqMatrix& y = dbl.flag[t - 1];
        for (std::size_t i = 0; i < y.rows(); ++i) {
            auto d = sub_rows(F, act_row(row_of(y, i), u), row_of(y, i));
            if (t == 1 ? !is_zero_row(d) : !fq_in_row_space(dbl.flag[t - 2], d))
                throw NotUnipotentInFlag("element moves the flag quotients");
        }
    }
    if (k >= 2)
        for (std::size_t i = 0; i < dbl.y_k.rows(); ++i) {
            auto d = sub_rows(F, act_row(row_of(dbl.y_k, i), u), row_of(dbl.y_k, i));
            if (!fq_in_row_space(dbl.flag[k - 2], d))
                throw NotUnipotentInFlag("element moves the middle quotient");
        }
    if (k == 1) return 0;

    auto nabla_basis_row = [&](std::size_t copy, std::size_t j) {
        std::vector<int> row(N, 0);
        row[(copy - 1) * n + j] = 1;
        row[(2 * k - copy) * n + j] = F.neg(1);
        return row;
    };

    int total = 0;
    // Terms i = 1..k-2: u_i from the copy-(k-i) nabla block down to copy
    // k-i+1, composed with the identity identification A_i.
    for (std::size_t i = 1; i + 1 <= k - 1; ++i) {
        const FqMatrix& yi = dbl.flag[i - 1];  // rows start with copy k-i+1
        for (std::size_t j = 0; j < n; ++j) {
            auto v = nabla_basis_row(k - i, j);
            auto d = sub_rows(F, act_row(v, u), v);
            auto c = fq_solve_row(yi, d);
            total = F.add(total, c[j]);  // coefficient on copy k-i+1, index j
        }
    }
    // Term i = k-1: A_{k-1} maps the copy-2 nabla block to the copy-1 Delta
    // block; u_{k-1} lands back in Y_{k-1} whose first rows are copy 2.
    {
        const FqMatrix& ylast = dbl.flag[k - 2];
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<int> v(N, 0);
            v[j] = 1;
            v[(2 * k - 1) * n + j] = 1;  // x_j^Delta in copy 1
            auto d = sub_rows(F, act_row(v, u), v);
            auto c = fq_solve_row(ylast, d);
            total = F.add(total, c[j]);
        }
    }
    return total;
}

// --- unipotent parameter spaces ---------------------------------------------

namespace {

/// Constraint accumulator: linear functionals on the N*N entries of T.
class LinearSystem {
public:
    LinearSystem(std::shared_ptr<const GFq> F, std::size_t unknowns)
        : F_(std::move(F)), unknowns_(unknowns) {}

    std::vector<int>& new_row() {
        rows_.emplace_back(unknowns_, 0);
        return rows_.back();
    }

    FqMatrix nullspace_basis() const {
        FqMatrix m(F_, rows_.size(), unknowns_);
        for (std::size_t i = 0; i < rows_.size(); ++i)
            for (std::size_t j = 0; j < unknowns_; ++j) m.at(i, j) = rows_[i][j];
        return right_nullspace(m);
    }

private:
    std::shared_ptr<const GFq> F_;
    std::size_t unknowns_;
    std::vector<std::vector<int>> rows_;
};

FqMatrix unvectorize(const std::shared_ptr<const GFq>& F, const std::vector<int>& v,
                     std::size_t N) {
    FqMatrix T(F, N, N);
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) T.at(i, j) = v[i * N + j];
    return T;
}

FqMatrix unvectorize_row(const FqMatrix& basis, std::size_t r, std::size_t N) {
    FqMatrix T(basis.field(), N, N);
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) T.at(i, j) = basis.at(r, i * N + j);
    return T;
}

/// Add constraints "w T lies in the row space of target" (target empty: w T = 0)
/// for every basis row w of src, with T entering as C T D for fixed C, D.
void constrain_maps_into(LinearSystem& sys, const FqMatrix& src, const FqMatrix* target,
                         std::size_t N, const GFq& F) {
    FqMatrix checks = target == nullptr
                          ? FqMatrix(src.field(), 0, 0)
                          : right_nullspace(*target);  // x in rowsp(target) iff x z^T = 0
    for (std::size_t r = 0; r < src.rows(); ++r) {
        if (target == nullptr) {
            // w T = 0: N constraints.
            for (std::size_t j = 0; j < N; ++j) {
                auto& row = sys.new_row();
                for (std::size_t i = 0; i < N; ++i) row[i * N + j] = src.at(r, i);
            }
        } else {
            for (std::size_t z = 0; z < checks.rows(); ++z) {
                auto& row = sys.new_row();
                for (std::size_t i = 0; i < N; ++i)
                    for (std::size_t j = 0; j < N; ++j)
                        row[i * N + j] = F.mul(src.at(r, i), checks.at(z, j));
            }
        }
    }
}

/// T S + S T^T = 0 (tangency to the isometry group).
void constrain_tangent(LinearSystem& sys, const FqMatrix& S, std::size_t N, const GFq& F) {
    for (std::size_t a = 0; a < N; ++a)
        for (std::size_t b = 0; b < N; ++b) {
            auto& row = sys.new_row();
            for (std::size_t j = 0; j < N; ++j) {
                row[a * N + j] = F.add(row[a * N + j], S.at(j, b));
                row[b * N + j] = F.add(row[b * N + j], S.at(a, j));
            }
        }
}

/// Basis of the Siegel radical parameter space of P(W^{Delta,k}):
/// {T : rows of T in W^{Delta,k}, W^{Delta,k} T = 0, T S + S T^T = 0}.
/// I + T ranges over N exactly (the radical is abelian here).
FqMatrix siegel_radical_space(const DoubledSpace& dbl) {
    const GFq& F = *dbl.base.F;
    std::size_t N = dbl.total.dim;
    LinearSystem sys(dbl.base.F, N * N);
    constrain_maps_into(sys, dbl.w_delta, nullptr, N, F);
    // every row of T in rowsp(w_delta): e_i T in rowsp
    FqMatrix all_rows = FqMatrix::identity(dbl.base.F, N);
    constrain_maps_into(sys, all_rows, &dbl.w_delta, N, F);
    constrain_tangent(sys, dbl.total.form, N, F);
    return sys.nullspace_basis();
}

/// Add the N-bullet flag-triviality conditions on T (linear).
void constrain_bullet_flag(LinearSystem& sys, const DoubledSpace& dbl, const FqMatrix& conj,
                           bool use_conj, std::size_t N, const GFq& F) {
    // Conditions on T' = conj applied... we constrain T directly; callers
    // supply src rows already transported.
    (void)conj;
    (void)use_conj;
    for (std::size_t t = 1; t + 1 <= dbl.k; ++t)
        constrain_maps_into(sys, dbl.flag[t - 1], t == 1 ? nullptr : &dbl.flag[t - 2], N, F);
    if (dbl.k >= 2) {
        constrain_maps_into(sys, dbl.y_k, &dbl.flag[dbl.k - 2], N, F);
        // trivial on W / Y_k as well
        FqMatrix all_rows = FqMatrix::identity(dbl.base.F, N);
        constrain_maps_into(sys, all_rows, &dbl.y_k, N, F);
    }
}

/// Lie algebra of N-bullet: flag conditions plus tangency.
FqMatrix bullet_lie_space(const DoubledSpace& dbl) {
    const GFq& F = *dbl.base.F;
    std::size_t N = dbl.total.dim;
    LinearSystem sys(dbl.base.F, N * N);
    constrain_bullet_flag(sys, dbl, FqMatrix(), false, N, F);
    constrain_tangent(sys, dbl.total.form, N, F);
    return sys.nullspace_basis();
}

/// Flag-triviality parameter space (group candidates; the isometry condition
/// is quadratic and filtered separately during enumeration).
FqMatrix bullet_flag_space(const DoubledSpace& dbl) {
    const GFq& F = *dbl.base.F;
    std::size_t N = dbl.total.dim;
    LinearSystem sys(dbl.base.F, N * N);
    constrain_bullet_flag(sys, dbl, FqMatrix(), false, N, F);
    return sys.nullspace_basis();
}

/// All elements of N-bullet by enumerating the flag space and filtering on
/// the quadratic isometry condition.
std::vector<FqMatrix> enumerate_bullet(const DoubledSpace& dbl, std::size_t max_states) {
    const GFq& F = *dbl.base.F;
    if (dbl.k == 1)
        return {FqMatrix::identity(dbl.base.F, dbl.total.dim)};
    long q = F.q();
    std::size_t N = dbl.total.dim;
    FqMatrix basis = bullet_flag_space(dbl);
    double states = 1;
    for (std::size_t i = 0; i < basis.rows(); ++i) {
        states *= q;
        if (states > static_cast<double>(max_states))
            throw TooLarge("unipotent radical too large to enumerate");
    }
    std::vector<FqMatrix> out;
    std::size_t total = static_cast<std::size_t>(states);
    FqMatrix id = FqMatrix::identity(dbl.base.F, N);
    for (std::size_t code = 0; code < total; ++code) {
        std::size_t c = code;
        FqMatrix T(dbl.base.F, N, N);
        for (std::size_t r = 0; r < basis.rows(); ++r) {
            int coeff = static_cast<int>(c % q);
            c /= q;
            if (coeff == 0) continue;
            for (std::size_t i = 0; i < N; ++i)
                for (std::size_t j = 0; j < N; ++j)
                    T.at(i, j) = F.add(T.at(i, j), F.mul(coeff, basis.at(r, i * N + j)));
        }
        FqMatrix u = fq_add(id, T);
        if (preserves_form(dbl.total, u)) out.push_back(std::move(u));
    }
    return out;
}

/// Memoized per-space data: the parameter bases and the enumerated radical
/// with its character values.  Keyed on the defining data of the doubled
/// space, which determines everything deterministically.
struct SpaceCache {
    bool have_siegel = false;
    FqMatrix siegel;
    bool have_lie = false;
    FqMatrix lie;
    bool have_bullet = false;
    std::vector<FqMatrix> bullet;
    std::vector<int> bullet_psi;
};

std::mutex cache_mu;
std::map<std::string, SpaceCache> caches;

std::string cache_key(const DoubledSpace& dbl) {
    std::ostringstream k;
    k << dbl.base.F->q() << ":" << dbl.base.dim << ":" << dbl.k << ":"
      << dbl.base.epsilon << ":";
    for (int e : dbl.base.form.entries()) k << e << ",";
    return k.str();
}

const FqMatrix& cached_siegel(const DoubledSpace& dbl) {
    std::lock_guard<std::mutex> lock(cache_mu);
    auto& c = caches[cache_key(dbl)];
    if (!c.have_siegel) {
        c.siegel = siegel_radical_space(dbl);
        c.have_siegel = true;
    }
    return c.siegel;
}

const FqMatrix& cached_lie(const DoubledSpace& dbl) {
    std::lock_guard<std::mutex> lock(cache_mu);
    auto& c = caches[cache_key(dbl)];
    if (!c.have_lie) {
        c.lie = bullet_lie_space(dbl);
        c.have_lie = true;
    }
    return c.lie;
}

const SpaceCache& cached_bullet(const DoubledSpace& dbl, std::size_t max_states) {
    std::lock_guard<std::mutex> lock(cache_mu);
    auto& c = caches[cache_key(dbl)];
    if (!c.have_bullet) {
        c.bullet = enumerate_bullet(dbl, max_states);
        c.bullet_psi.reserve(c.bullet.size());
        for (const auto& u : c.bullet) c.bullet_psi.push_back(psi_argument(u, dbl));
        c.have_bullet = true;
    }
    return c;
}

}  // namespace

std::vector<FqMatrix> enumerate_unipotent_radical(const DoubledSpace& dbl,
                                                  std::size_t max_states) {
    return cached_bullet(dbl, max_states).bullet;
}

// --- omega classification ----------------------------------------------------

OmegaReport omega_classify(const FqMatrix& gamma, const DoubledSpace& dbl,
                           std::size_t max_states) {
    const GFq& F = *dbl.base.F;
    std::size_t N = dbl.total.dim, k = dbl.k;
    if (!preserves_form(dbl.total, gamma))
        throw NotInGroup("omega classification needs an isometry of the doubled space");
    FqMatrix L = fq_row_space(fq_mul(dbl.w_delta, gamma));

    if (k == 1) return OmegaReport{OmegaClass::Tilde, 0, true, false};

    const FqMatrix& yk1 = dbl.flag[k - 2];
    FqMatrix meet = fq_intersect_row_spaces(L, yk1);
    std::size_t d = meet.rows();

    // Omega1: psi nontrivial on gamma^{-1} N gamma cap N-bullet.  The Siegel
    // radical is abelian and its conjugates stay linear in the parameter, so
    // this is a nullspace computation followed by evaluating psi on a basis.
    FqMatrix gamma_inv = fq_inverse(gamma);
    const FqMatrix& nspace = cached_siegel(dbl);
    // Coordinates c over nspace; T = gamma_inv (sum c_r T'_r) gamma must
    // satisfy the bullet flag conditions.
    std::vector<FqMatrix> conjugated;
    for (std::size_t r = 0; r < nspace.rows(); ++r)
        conjugated.push_back(
            fq_mul(fq_mul(gamma_inv, unvectorize_row(nspace, r, N)), gamma));
    // Build the constraint system in c.
    auto in_space_checks = [&](const FqMatrix& target) { return right_nullspace(target); };
    LinearSystem csys(dbl.base.F, nspace.rows());
    auto add_membership = [&](const FqMatrix& src, const FqMatrix* target) {
        FqMatrix checks =
            target == nullptr ? FqMatrix(dbl.base.F, 0, 0) : in_space_checks(*target);
        for (std::size_t sr = 0; sr < src.rows(); ++sr) {
            auto v = row_of(src, sr);
            // image rows v * T_r for each basis direction
            std::vector<std::vector<int>> imgs;
            for (const auto& Tc : conjugated) imgs.push_back(act_row(v, Tc));
            if (target == nullptr) {
                for (std::size_t j = 0; j < N; ++j) {
                    auto& row = csys.new_row();
                    for (std::size_t r = 0; r < imgs.size(); ++r) row[r] = imgs[r][j];
                }
            } else {
                for (std::size_t z = 0; z < checks.rows(); ++z) {
                    auto& row = csys.new_row();
                    for (std::size_t r = 0; r < imgs.size(); ++r) {
                        int acc = 0;
                        for (std::size_t j = 0; j < N; ++j)
                            acc = F.add(acc, F.mul(imgs[r][j], checks.at(z, j)));
                        row[r] = acc;
                    }
                }
            }
        }
    };
    for (std::size_t t = 1; t + 1 <= k; ++t)
        add_membership(dbl.flag[t - 1], t == 1 ? nullptr : &dbl.flag[t - 2]);
    add_membership(dbl.y_k, &dbl.flag[k - 2]);
    FqMatrix vgamma = csys.nullspace_basis();

    FqMatrix id = FqMatrix::identity(dbl.base.F, N);
    bool omega1 = false;
    for (std::size_t r = 0; r < vgamma.rows() && !omega1; ++r) {
        FqMatrix T(dbl.base.F, N, N);
        for (std::size_t s = 0; s < nspace.rows(); ++s) {
            int c = vgamma.at(r, s);
            if (c == 0) continue;
            for (std::size_t i = 0; i < N; ++i)
                for (std::size_t j = 0; j < N; ++j)
                    T.at(i, j) = F.add(T.at(i, j), F.mul(c, conjugated[s].at(i, j)));
        }
        if (psi_argument(fq_add(id, T), dbl) != 0) omega1 = true;
    }
    if (omega1) return OmegaReport{OmegaClass::Omega1, d, d == 0, false};

    // Flag induced on L by intersection with the Y-chain; repeats and
    // trivial members are deleted when forming the induced pair, and we
    // record when that normalization fires.
    bool fired = false;
    {
        std::size_t prev = 0;
        for (std::size_t t = 1; t <= k; ++t) {
            std::size_t dim_t =
                fq_intersect_row_spaces(L, t < k ? dbl.flag[t - 1] : dbl.y_k).rows();
            if (dim_t == prev || dim_t == L.rows()) fired = true;
            prev = dim_t;
        }
    }

    // The flag character descends to the image of the L-stabilizer part of
    // N-bullet inside GL(L) exactly when gamma is not in Omega1; verify that
    // directly on the enumerated group as an independent cross-check.
    const SpaceCache& bc = cached_bullet(dbl, max_states);
    const std::vector<FqMatrix>& bullet = bc.bullet;
    std::size_t h = L.rows();
    std::map<FqMatrix, int> induced;
    for (std::size_t bi = 0; bi < bullet.size(); ++bi) {
        const auto& u = bullet[bi];
        bool stab = true;
        FqMatrix M(dbl.base.F, h, h);
        for (std::size_t i = 0; i < h && stab; ++i) {
            auto img = act_row(row_of(L, i), u);
            try {
                auto c = fq_solve_row(L, img);
                for (std::size_t j = 0; j < h; ++j) M.at(i, j) = c[j];
            } catch (const ShapeMismatch&) {
                stab = false;
            }
        }
        if (!stab) continue;
        auto [it, fresh] = induced.emplace(std::move(M), bc.bullet_psi[bi]);
        if (!fresh && it->second != bc.bullet_psi[bi])
            throw InternalError("induced character is not well-defined on the Levi");
    }

    // With the character well defined, the coset is Omega2 exactly when L
    // meets Y_{k-1}: the induced pair then sits above the generic-position
    // orbit.  (The graded composition test recovers this in odd
    // characteristic; in characteristic 2 the Delta/nabla collapse
    // degenerates the graded pieces, so the subspace criterion is the
    // authoritative form.)
    if (d > 0) return OmegaReport{OmegaClass::Omega2, d, false, fired};
    return OmegaReport{OmegaClass::Tilde, d, true, fired};
}

// --- whittaker pairs -----------------------------------------------------------

PairReport whittaker_pair_classify(const WhittakerPair& pair, std::size_t k,
                                   std::size_t m) {
    const auto& subs = pair.flag.subspaces;
    const auto& maps = pair.a_maps;
    if (subs.empty()) throw ShapeMismatch("flag must contain at least one subspace");
    std::vector<std::size_t> dims;
    for (std::size_t i = 0; i < subs.size(); ++i) {
        dims.push_back(fq_rank(subs[i]));
        if (i > 0 && dims[i] < dims[i - 1]) throw ShapeMismatch("flag must ascend");
    }
    std::size_t ambient = subs[0].cols();
    if (maps.size() != subs.size())
        throw ShapeMismatch("need one map per flag quotient");
    // Quotient dims: Y_1, Y_2/Y_1, ..., W/Y_s.
    std::vector<std::size_t> qdims;
    for (std::size_t i = 0; i < dims.size(); ++i)
        qdims.push_back(i == 0 ? dims[0] : dims[i] - dims[i - 1]);
    qdims.push_back(ambient - dims.back());
    for (std::size_t i = 0; i < maps.size(); ++i)
        if (maps[i].rows() != qdims[i] || maps[i].cols() != qdims[i + 1])
            throw ShapeMismatch("map shape disagrees with flag quotients");

    std::size_t rank_a = maps.empty() ? 0 : fq_rank(maps[0]);

    bool full = subs.size() == k - 1;
    if (full)
        for (std::size_t i = 0; i < dims.size(); ++i)
            if (dims[i] != m * (i + 1)) full = false;
    if (full)
        for (const auto& a : maps)
            if (a.rows() != m || a.cols() != m || !fq_invertible(a)) full = false;
    if (full) return PairReport{PairClass::InOrbitKm, rank_a, m, 0};

    bool higher = false;
    if (subs.size() >= k && maps.size() >= k) {
        for (std::size_t i = 0; i + k <= maps.size() && !higher; ++i) {
            FqMatrix comp = maps[i];
            for (std::size_t j = i + 1; j < i + k; ++j) comp = fq_mul(comp, maps[j]);
            for (int e : comp.entries())
                if (e != 0) higher = true;
        }
    }
    if (higher) return PairReport{PairClass::Higher, rank_a, 0, 0};

    std::size_t d1 = qdims[0];
    std::size_t kerdim = d1 - rank_a;
    return PairReport{PairClass::Other, rank_a, 0, kerdim * (d1 - kerdim)};
}

// --- lagrangian enumeration and double cosets -----------------------------------

std::vector<FqMatrix> enumerate_lagrangians(const FormedSpace& space,
                                            std::size_t max_states) {
    if (space.epsilon != -1)
        throw UnsupportedFamily("maximal isotropic enumeration implemented for the symplectic case");
    const GFq& F = *space.F;
    long q = F.q();
    std::size_t N = space.dim, half = N / 2;
    std::set<FqMatrix> level;
    level.insert(FqMatrix(space.F, 0, N));
    for (std::size_t d = 0; d < half; ++d) {
        std::set<FqMatrix> next;
        for (const auto& S : level) {
            // perp of S: right nullspace of S * form (columns), as row basis
            FqMatrix sf = d == 0 ? FqMatrix(space.F, 0, N) : fq_mul(S, space.form);
            FqMatrix perp = d == 0 ? FqMatrix::identity(space.F, N) : right_nullspace(sf);
            // enumerate vectors in span(perp) not in S
            std::size_t pr = perp.rows();
            double combos = 1;
            for (std::size_t i = 0; i < pr; ++i) combos *= q;
            for (std::size_t code = 1; code < static_cast<std::size_t>(combos); ++code) {
                std::vector<int> v(N, 0);
                std::size_t c = code;
                for (std::size_t r = 0; r < pr; ++r) {
                    int coeff = static_cast<int>(c % q);
                    c /= q;
                    if (coeff == 0) continue;
                    for (std::size_t j = 0; j < N; ++j)
                        v[j] = F.add(v[j], F.mul(coeff, perp.at(r, j)));
                }
                if (d > 0 && fq_in_row_space(S, v)) continue;
                if (is_zero_row(v)) continue;
                FqMatrix ext(space.F, d + 1, N);
                for (std::size_t i = 0; i < d; ++i)
                    for (std::size_t j = 0; j < N; ++j) ext.at(i, j) = S.at(i, j);
                for (std::size_t j = 0; j < N; ++j) ext.at(d, j) = v[j];
                next.insert(fq_row_space(ext));
                if (next.size() > max_states)
                    throw TooLarge("isotropic subspace count exceeds the state bound");
            }
        }
        level = std::move(next);
    }
    return std::vector<FqMatrix>(level.begin(), level.end());
}

FqMatrix coset_representative(const DoubledSpace& dbl, const FqMatrix& lagrangian) {
    if (dbl.total.epsilon != -1)
        throw UnsupportedFamily("coset representatives implemented for the symplectic case");
    const GFq& F = *dbl.base.F;
    std::size_t N = dbl.total.dim, h = N / 2;
    if (lagrangian.rows() != h || lagrangian.cols() != N)
        throw ShapeMismatch("expected a maximal isotropic row basis");

    auto complete = [&](const FqMatrix& A) {
        // b_i with <a_j, b_i> = delta_{ij}, <b_j, b_i> = 0 for j < i.
        FqMatrix basis(dbl.base.F, N, N);
        for (std::size_t i = 0; i < h; ++i)
            for (std::size_t j = 0; j < N; ++j) basis.at(i, j) = A.at(i, j);
        for (std::size_t i = 0; i < h; ++i) {
            // Solve M x^T = rhs where rows of M are (a_j form) and (b_j form).
            FqMatrix M(dbl.base.F, h + i, N);
            std::vector<int> rhs(h + i, 0);
            for (std::size_t j = 0; j < h; ++j) {
                auto row = act_row(row_of(A, j), dbl.total.form);
                for (std::size_t c = 0; c < N; ++c) M.at(j, c) = row[c];
                rhs[j] = j == i ? 1 : 0;
            }
            for (std::size_t j = 0; j < i; ++j) {
                auto row = act_row(row_of(basis, h + j), dbl.total.form);
                for (std::size_t c = 0; c < N; ++c) M.at(h + j, c) = row[c];
            }
            // Solve M v = rhs for column v: use transpose trick via fq_solve_row
            // on M^T: v M^T = rhs.
            auto v = fq_solve_row(fq_transpose(M), rhs);
            for (std::size_t c = 0; c < N; ++c) basis.at(h + i, c) = v[c];
        }
        return basis;
    };

    FqMatrix std_basis = complete(dbl.w_delta);
    FqMatrix l_basis = complete(lagrangian);
    FqMatrix gamma = fq_mul(fq_inverse(std_basis), l_basis);
    if (!preserves_form(dbl.total, gamma))
        throw InternalError("coset representative is not an isometry");
    if (fq_row_space(fq_mul(dbl.w_delta, gamma)) != fq_row_space(lagrangian))
        throw InternalError("coset representative moves the wrong subspace");
    return gamma;
}

namespace {

bool is_unipotent(const FqMatrix& g) {
    const GFq& F = fld(g);
    FqMatrix T = fq_sub(g, FqMatrix::identity(g.field(), g.rows()));
    FqMatrix p = T;
    for (std::size_t i = 1; i < g.rows(); ++i) p = fq_mul(p, T);
    (void)F;
    return std::all_of(p.entries().begin(), p.entries().end(),
                       [](int x) { return x == 0; });
}

FqMatrix act_subspace(const FqMatrix& L, const FqMatrix& g) {
    return fq_row_space(fq_mul(L, g));
}

}  // namespace

DoubleCosetReport enumerate_double_cosets(char family, std::size_t m, long q,
                                          std::size_t k, std::size_t max_states,
                                          int jobs) {
    if (family != 'C')
        throw UnsupportedFamily("double-coset enumeration implemented for the symplectic family");
    MatrixGroup G = build_group(family, m, q);
    DoubledSpace dbl = make_doubled(G.space, k);
    std::vector<FqMatrix> lagrangians = enumerate_lagrangians(dbl.total, max_states);
    std::map<FqMatrix, std::size_t> index;
    for (std::size_t i = 0; i < lagrangians.size(); ++i) index[lagrangians[i]] = i;

    FqMatrix id_base = FqMatrix::identity(dbl.base.F, dbl.base.dim);
    std::vector<FqMatrix> action_gens;
    for (const auto& g : G.generators) {
        action_gens.push_back(iota(g, id_base, dbl));
        action_gens.push_back(iota(id_base, g, dbl));
    }
    if (k >= 2)
        for (const auto& u : cached_bullet(dbl, max_states).bullet) action_gens.push_back(u);

    std::vector<long> orbit_of(lagrangians.size(), -1);
    long orbit_count = 0;
    for (std::size_t start = 0; start < lagrangians.size(); ++start) {
        if (orbit_of[start] >= 0) continue;
        long id = orbit_count++;
        orbit_of[start] = id;
        std::vector<std::size_t> frontier{start};
        std::mutex mu;
        while (!frontier.empty()) {
            std::vector<std::size_t> next;
            auto expand = [&](std::size_t lo, std::size_t hi,
                              std::vector<std::size_t>& local) {
                for (std::size_t fi = lo; fi < hi; ++fi)
                    for (const auto& g : action_gens) {
                        FqMatrix img = act_subspace(lagrangians[frontier[fi]], g);
                        std::size_t j = index.at(img);
                        std::lock_guard<std::mutex> lock(mu);
                        if (orbit_of[j] < 0) {
                            orbit_of[j] = id;
                            local.push_back(j);
                        }
                    }
            };
            if (jobs <= 1 || frontier.size() < 4) {
                expand(0, frontier.size(), next);
            } else {
                std::size_t nthreads = std::min<std::size_t>(jobs, frontier.size());
                std::vector<std::vector<std::size_t>> locals(nthreads);
                std::vector<std::thread> threads;
                for (std::size_t t = 0; t < nthreads; ++t) {
                    std::size_t lo = frontier.size() * t / nthreads;
                    std::size_t hi = frontier.size() * (t + 1) / nthreads;
                    threads.emplace_back(expand, lo, hi, std::ref(locals[t]));
                }
                for (auto& th : threads) th.join();
                for (auto& l : locals) next.insert(next.end(), l.begin(), l.end());
            }
            std::sort(next.begin(), next.end());
            frontier = std::move(next);
        }
    }

    FqMatrix w_delta_key = fq_row_space(dbl.w_delta);
    DoubleCosetReport report{family, m, k, q, lagrangians.size(), {}};
    for (long id = 0; id < orbit_count; ++id) {
        FqMatrix rep;
        std::size_t size = 0;
        bool contains_main = false;
        for (std::size_t i = 0; i < lagrangians.size(); ++i) {
            if (orbit_of[i] != id) continue;
            if (size == 0) rep = lagrangians[i];
            ++size;
            if (lagrangians[i] == w_delta_key) contains_main = true;
        }
        if (contains_main) rep = w_delta_key;

        std::size_t stab = 0;
        for (const auto& g1 : G.elements)
            for (const auto& g2 : G.elements)
                if (act_subspace(rep, iota(g1, g2, dbl)) == rep) ++stab;

        bool n_minus = false;
        for (const auto& g : G.elements) {
            if (g == FqMatrix::identity(dbl.base.F, dbl.base.dim)) continue;
            if (!is_unipotent(g)) continue;
            if (act_subspace(rep, iota(id_base, g, dbl)) == rep) {
                n_minus = true;
                break;
            }
        }

        std::string cls;
        if (contains_main) {
            cls = "main";
        } else if (k == 1) {
            cls = "negligible";
        } else {
            OmegaReport omega = omega_classify(coset_representative(dbl, rep), dbl, max_states);
            if (omega.label == OmegaClass::Omega1)
                cls = "omega1";
            else if (omega.label == OmegaClass::Omega2)
                cls = "omega2";
            else
                cls = "negligible";
        }
        report.orbits.push_back(CosetOrbit{rep, size, cls, stab, n_minus});
    }
    std::sort(report.orbits.begin(), report.orbits.end(),
              [](const CosetOrbit& a, const CosetOrbit& b) {
                  return a.representative < b.representative;
              });
    return report;
}

int modular_character_check(const FqMatrix& g1, const FqMatrix& g2,
                            const DoubledSpace& dbl) {
    const GFq& F = *dbl.base.F;
    if (!preserves_form(dbl.base, g1) || !preserves_form(dbl.base, g2))
        throw NotInGroup("modular character needs group elements");
    if (dbl.k == 1) return 1;
    std::size_t N = dbl.total.dim;
    const FqMatrix& lie = cached_lie(dbl);
    FqMatrix g = iota(g1, g2, dbl);
    FqMatrix ginv = fq_inverse(g);
    // Matrix of T -> g^{-1} T g in the lie basis.
    FqMatrix coeff(dbl.base.F, lie.rows(), lie.rows());
    for (std::size_t r = 0; r < lie.rows(); ++r) {
        FqMatrix T = unvectorize_row(lie, r, N);
        FqMatrix img = fq_mul(fq_mul(ginv, T), g);
        std::vector<int> v(N * N);
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j) v[i * N + j] = img.at(i, j);
        auto c = fq_solve_row(lie, v);
        for (std::size_t s = 0; s < lie.rows(); ++s) coeff.at(r, s) = c[s];
    }
    (void)F;
    return fq_det(coeff);
}

}  // namespace bdcover
