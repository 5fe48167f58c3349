#include "bdcover/rootdatum.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace bdcover {

std::string family_name(Family f) {
    switch (f) {
        case Family::A: return "A";
        case Family::B: return "B";
        case Family::C: return "C";
        case Family::D: return "D";
    }
    return "?";
}

Int RootDatum::pair(const Vec& x, const Vec& y) const {
    if (x.size() != X.rank || y.size() != Y.rank) throw DimensionMismatch("pairing arguments");
    Int s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

std::optional<std::size_t> RootDatum::root_index(const Vec& alpha) const {
    if (root_lookup_.empty() && !roots.empty())
        for (std::size_t i = 0; i < roots.size(); ++i) root_lookup_.emplace(roots[i], i);
    auto it = root_lookup_.find(alpha);
    if (it == root_lookup_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::size_t> RootDatum::coroot_index(const Vec& coroot) const {
    if (coroot_lookup_.empty() && !coroots.empty())
        for (std::size_t i = 0; i < coroots.size(); ++i) coroot_lookup_.emplace(coroots[i], i);
    auto it = coroot_lookup_.find(coroot);
    if (it == coroot_lookup_.end()) return std::nullopt;
    return it->second;
}

IntMatrix RootDatum::reflection_on_Y(std::size_t root_idx) const {
    const Vec& alpha = roots[root_idx];
    const Vec& alpha_v = coroots[root_idx];
    IntMatrix m = IntMatrix::identity(Y.rank);
    // s(y) = y - <alpha, y> alpha_v, column by column
    for (std::size_t j = 0; j < Y.rank; ++j) {
        Int c = alpha[j];  // <alpha, e_j> with the identity pairing
        for (std::size_t i = 0; i < Y.rank; ++i) m(i, j) -= c * alpha_v[i];
    }
    return m;
}

IntMatrix RootDatum::reflection_on_X(std::size_t root_idx) const {
    const Vec& alpha = roots[root_idx];
    const Vec& alpha_v = coroots[root_idx];
    IntMatrix m = IntMatrix::identity(X.rank);
    for (std::size_t j = 0; j < X.rank; ++j) {
        Int c = alpha_v[j];  // <e_j, alpha_v>
        for (std::size_t i = 0; i < X.rank; ++i) m(i, j) -= c * alpha[i];
    }
    return m;
}

std::optional<Vec> RootDatum::simple_coroot_coordinates(const Vec& v) const {
    const std::size_t s = simple.size();
    // Solve B c = v over Q by Gaussian elimination on the (rank x s) basis
    // matrix of simple coroots, then check integrality.
    const std::size_t n = Y.rank;
    std::vector<std::vector<Rat>> aug(n, std::vector<Rat>(s + 1));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < s; ++j) aug[i][j] = Rat(coroots[simple[j]][i]);
        aug[i][s] = Rat(v[i]);
    }
    std::size_t row = 0;
    std::vector<std::size_t> pivot_col;
    for (std::size_t col = 0; col < s && row < n; ++col) {
        std::size_t p = row;
        while (p < n && aug[p][col] == 0) ++p;
        if (p == n) continue;
        std::swap(aug[p], aug[row]);
        Rat d = aug[row][col];
        for (auto& e : aug[row]) e /= d;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == row || aug[i][col] == 0) continue;
            Rat f = aug[i][col];
            for (std::size_t j = 0; j <= s; ++j) aug[i][j] -= f * aug[row][j];
        }
        pivot_col.push_back(col);
        ++row;
    }
    for (std::size_t i = row; i < n; ++i)
        if (aug[i][s] != 0) return std::nullopt;  // not in the span
    Vec c(s, Int(0));
    for (std::size_t i = 0; i < pivot_col.size(); ++i) {
        const Rat& val = aug[i][s];
        if (boost::multiprecision::denominator(val) != 1) return std::nullopt;
        c[pivot_col[i]] = boost::multiprecision::numerator(val);
    }
    return c;
}

bool RootDatum::coroot_is_positive(std::size_t idx) const {
    auto c = simple_coroot_coordinates(coroots[idx]);
    if (!c) throw InternalError("coroot outside the simple-coroot span");
    bool pos = false, neg = false;
    for (const Int& x : *c) {
        if (x > 0) pos = true;
        if (x < 0) neg = true;
    }
    if (pos && neg) throw InternalError("mixed-sign coroot coordinates");
    return pos;
}

namespace {

Vec basis_vec(std::size_t n, std::size_t i, Int v = 1) {
    Vec e(n, Int(0));
    e[i] = std::move(v);
    return e;
}

Vec combine(std::size_t n, std::size_t i, const Int& a, std::size_t j, const Int& b) {
    Vec e(n, Int(0));
    e[i] = a;
    e[j] = b;
    return e;
}

}  // namespace

RootDatum build_root_datum(Family family, std::size_t n) {
    RootDatum d;
    d.family = family;
    d.param = n;
    std::size_t rank = 0;
    switch (family) {
        case Family::A:
            rank = n + 1;
            break;
        case Family::B:
        case Family::C:
            if (n < 1) throw UnsupportedRank("B/C require n >= 1");
            rank = n;
            break;
        case Family::D:
            if (n < 2) throw UnsupportedRank("D requires n >= 2");
            rank = n;
            break;
    }
    d.Y = Lattice{rank};
    d.X = Lattice{rank};
    d.pairing = IntMatrix::identity(rank);

    auto add = [&](const Vec& root, const Vec& coroot) {
        d.roots.push_back(root);
        d.coroots.push_back(coroot);
    };
    auto add_simple = [&](const Vec& root, const Vec& coroot) {
        d.simple.push_back(d.roots.size());
        add(root, coroot);
    };

    switch (family) {
        case Family::A: {
            for (std::size_t i = 0; i + 1 < rank; ++i)
                add_simple(combine(rank, i, 1, i + 1, -1), combine(rank, i, 1, i + 1, -1));
            for (std::size_t i = 0; i < rank; ++i)
                for (std::size_t j = 0; j < rank; ++j) {
                    if (i == j || (j == i + 1)) continue;
                    add(combine(rank, i, 1, j, -1), combine(rank, i, 1, j, -1));
                }
            break;
        }
        case Family::B: {
            for (std::size_t i = 0; i + 1 < n; ++i)
                add_simple(combine(n, i, 1, i + 1, -1), combine(n, i, 1, i + 1, -1));
            add_simple(basis_vec(n, n - 1), basis_vec(n, n - 1, 2));  // short e_n, coroot 2e_n
            for (std::size_t i = 0; i < n; ++i) {
                add(basis_vec(n, i, -1), basis_vec(n, i, -2));
                if (i + 1 < n) add(basis_vec(n, i), basis_vec(n, i, 2));
            }
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j) {
                    if (j != i + 1) add(combine(n, i, 1, j, -1), combine(n, i, 1, j, -1));
                    add(combine(n, i, -1, j, 1), combine(n, i, -1, j, 1));
                    add(combine(n, i, 1, j, 1), combine(n, i, 1, j, 1));
                    add(combine(n, i, -1, j, -1), combine(n, i, -1, j, -1));
                }
            break;
        }
        case Family::C: {
            for (std::size_t i = 0; i + 1 < n; ++i)
                add_simple(combine(n, i, 1, i + 1, -1), combine(n, i, 1, i + 1, -1));
            add_simple(basis_vec(n, n - 1, 2), basis_vec(n, n - 1));  // long 2e_n
            for (std::size_t i = 0; i < n; ++i) {
                add(basis_vec(n, i, -2), basis_vec(n, i, -1));
                if (i + 1 < n) add(basis_vec(n, i, 2), basis_vec(n, i));
            }
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j) {
                    if (j != i + 1) add(combine(n, i, 1, j, -1), combine(n, i, 1, j, -1));
                    add(combine(n, i, -1, j, 1), combine(n, i, -1, j, 1));
                    add(combine(n, i, 1, j, 1), combine(n, i, 1, j, 1));
                    add(combine(n, i, -1, j, -1), combine(n, i, -1, j, -1));
                }
            break;
        }
        case Family::D: {
            for (std::size_t i = 0; i + 1 < n; ++i)
                add_simple(combine(n, i, 1, i + 1, -1), combine(n, i, 1, i + 1, -1));
            add_simple(combine(n, n - 2, 1, n - 1, 1), combine(n, n - 2, 1, n - 1, 1));
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j) {
                    if (j != i + 1) add(combine(n, i, 1, j, -1), combine(n, i, 1, j, -1));
                    add(combine(n, i, -1, j, 1), combine(n, i, -1, j, 1));
                    if (!(i == n - 2 && j == n - 1))
                        add(combine(n, i, 1, j, 1), combine(n, i, 1, j, 1));
                    add(combine(n, i, -1, j, -1), combine(n, i, -1, j, -1));
                }
            break;
        }
    }

    // Consistency: <alpha, alpha_v> = 2 and no duplicates.
    std::set<Vec> seen;
    for (std::size_t i = 0; i < d.roots.size(); ++i) {
        if (d.pair(d.roots[i], d.coroots[i]) != 2)
            throw InternalError("root/coroot pairing is not 2");
        if (!seen.insert(d.roots[i]).second) throw InternalError("duplicate root");
    }
    return d;
}

WeylElement weyl_identity(const RootDatum& datum) {
    return WeylElement{{}, IntMatrix::identity(datum.Y.rank)};
}

WeylElement weyl_simple(const RootDatum& datum, std::size_t simple_idx) {
    return WeylElement{{simple_idx}, datum.reflection_on_Y(datum.simple.at(simple_idx))};
}

Vec weyl_act(const WeylElement& w, const Vec& y) { return w.action.apply(y); }

std::vector<IntMatrix> weyl_group(const RootDatum& datum) {
    std::vector<IntMatrix> gens;
    for (std::size_t s = 0; s < datum.simple.size(); ++s)
        gens.push_back(datum.reflection_on_Y(datum.simple[s]));
    std::vector<IntMatrix> elems{IntMatrix::identity(datum.Y.rank)};
    std::set<std::vector<Int>> seen;
    auto key = [&](const IntMatrix& m) {
        std::vector<Int> k;
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j) k.push_back(m(i, j));
        return k;
    };
    seen.insert(key(elems[0]));
    for (std::size_t head = 0; head < elems.size(); ++head) {
        IntMatrix cur = elems[head];
        for (const auto& g : gens) {
            IntMatrix nxt = g * cur;
            if (seen.insert(key(nxt)).second) elems.push_back(nxt);
        }
    }
    return elems;
}

namespace {

Vec add_vec(const Vec& a, const Vec& b) {
    Vec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

void star_search(const RootDatum& datum, const Vec& target, Vec& remaining, Vec& prefix,
                 std::vector<std::size_t>& path, std::vector<StarDecomposition>& out,
                 std::size_t limit, bool all) {
    if (!all && !out.empty()) return;
    if (out.size() >= limit) return;
    if (prefix == target) {
        out.push_back(StarDecomposition{target, path});
        return;
    }
    for (std::size_t s = 0; s < datum.simple.size(); ++s) {
        if (remaining[s] <= 0) continue;
        Vec next = add_vec(prefix, datum.coroots[datum.simple[s]]);
        if (!datum.is_coroot(next)) continue;
        remaining[s] -= 1;
        path.push_back(s);
        Vec saved = std::move(prefix);
        prefix = std::move(next);
        star_search(datum, target, remaining, prefix, path, out, limit, all);
        prefix = std::move(saved);
        path.pop_back();
        remaining[s] += 1;
    }
}

std::vector<StarDecomposition> star_run(const RootDatum& datum, const Vec& coroot,
                                        std::size_t limit, bool all) {
    auto idx = datum.coroot_index(coroot);
    if (!idx) throw NoDecomposition("vector is not a coroot");
    if (!datum.coroot_is_positive(*idx))
        throw NoDecomposition("star decomposition defined for positive coroots");
    auto coords = datum.simple_coroot_coordinates(coroot);
    Vec remaining = *coords;
    Vec prefix(datum.Y.rank, Int(0));
    std::vector<std::size_t> path;
    std::vector<StarDecomposition> out;
    star_search(datum, coroot, remaining, prefix, path, out, limit, all);
    if (out.empty()) throw NoDecomposition("no (*) ordering exists");
    return out;
}

}  // namespace

StarDecomposition star_decompose(const RootDatum& datum, const Vec& coroot) {
    return star_run(datum, coroot, 1, false)[0];
}

std::vector<StarDecomposition> star_decompose_all(const RootDatum& datum, const Vec& coroot,
                                                  std::size_t limit) {
    return star_run(datum, coroot, limit, true);
}

}  // namespace bdcover
