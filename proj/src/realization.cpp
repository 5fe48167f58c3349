#include "bdcover/realization.hpp"

#include <algorithm>

namespace bdcover {

namespace {

using RatVec = std::vector<Rat>;
using RatMat = std::vector<RatVec>;

// Nullspace basis of a (rows x cols) rational matrix.
std::vector<RatVec> nullspace(RatMat a, std::size_t cols) {
    const std::size_t rows = a.size();
    std::size_t rank = 0;
    std::vector<std::ptrdiff_t> pivot_of_col(cols, -1);
    for (std::size_t col = 0; col < cols && rank < rows; ++col) {
        std::size_t p = rank;
        while (p < rows && a[p][col] == 0) ++p;
        if (p == rows) continue;
        std::swap(a[p], a[rank]);
        Rat d = a[rank][col];
        for (auto& e : a[rank]) e /= d;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == rank || a[i][col] == 0) continue;
            Rat f = a[i][col];
            for (std::size_t j = 0; j < cols; ++j) a[i][j] -= f * a[rank][j];
        }
        pivot_of_col[col] = static_cast<std::ptrdiff_t>(rank);
        ++rank;
    }
    std::vector<RatVec> basis;
    for (std::size_t col = 0; col < cols; ++col) {
        if (pivot_of_col[col] >= 0) continue;
        RatVec v(cols, Rat(0));
        v[col] = 1;
        for (std::size_t c2 = 0; c2 < cols; ++c2)
            if (pivot_of_col[c2] >= 0) v[c2] = -a[static_cast<std::size_t>(pivot_of_col[c2])][col];
        basis.push_back(std::move(v));
    }
    return basis;
}

IntMatrix commutator(const IntMatrix& a, const IntMatrix& b) {
    IntMatrix ab = a * b;
    IntMatrix ba = b * a;
    IntMatrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = ab(i, j) - ba(i, j);
    return out;
}

bool is_zero(const IntMatrix& m) {
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (m(i, j) != 0) return false;
    return true;
}

// exp(tX) for a nilpotent integer matrix; must come out integral.
IntMatrix exp_nilpotent(const IntMatrix& X, int t) {
    const std::size_t n = X.rows();
    // rational accumulation
    RatMat acc(n, RatVec(n, Rat(0))), term(n, RatVec(n, Rat(0)));
    for (std::size_t i = 0; i < n; ++i) {
        acc[i][i] = 1;
        term[i][i] = 1;
    }
    for (std::size_t k = 1; k <= n; ++k) {
        RatMat next(n, RatVec(n, Rat(0)));
        bool nonzero = false;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t l = 0; l < n; ++l) {
                if (term[i][l] == 0) continue;
                for (std::size_t j = 0; j < n; ++j) {
                    if (X(l, j) == 0) continue;
                    next[i][j] += term[i][l] * Rat(X(l, j)) * Rat(t) / Rat(Int(k));
                    nonzero = true;
                }
            }
        if (!nonzero) break;
        term = next;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) acc[i][j] += term[i][j];
    }
    IntMatrix out(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (boost::multiprecision::denominator(acc[i][j]) != 1)
                throw RealizationMismatch("non-integral root one-parameter matrix");
            out(i, j) = boost::multiprecision::numerator(acc[i][j]);
        }
    return out;
}

}  // namespace

Realization::Realization(const RootDatum& datum) : datum_(datum) {
    const std::size_t rank = datum_.rank();
    const std::size_t nroots = datum_.roots.size();

    // Slot weights and bilinear form of the pinned realization.
    switch (datum_.family) {
        case Family::A: {
            N_ = rank;
            has_form_ = false;
            for (std::size_t a = 0; a < N_; ++a) {
                Vec w(rank, Int(0));
                w[a] = 1;
                slot_weight_.push_back(w);
            }
            break;
        }
        case Family::C: {
            N_ = 2 * rank;
            has_form_ = true;
            J_ = IntMatrix(N_, N_);
            for (std::size_t a = 0; a < N_; ++a) J_(a, N_ - 1 - a) = a < rank ? 1 : -1;
            for (std::size_t a = 0; a < N_; ++a) {
                Vec w(rank, Int(0));
                if (a < rank)
                    w[a] = 1;
                else
                    w[N_ - 1 - a] = -1;
                slot_weight_.push_back(w);
            }
            break;
        }
        case Family::B:
        case Family::D: {
            N_ = datum_.family == Family::B ? 2 * rank + 1 : 2 * rank;
            has_form_ = true;
            J_ = IntMatrix(N_, N_);
            for (std::size_t a = 0; a < N_; ++a) J_(a, N_ - 1 - a) = 1;
            if (datum_.family == Family::B) J_(rank, rank) = 2;  // middle slot
            for (std::size_t a = 0; a < N_; ++a) {
                Vec w(rank, Int(0));
                if (a < rank)
                    w[a] = 1;
                else if (N_ - 1 - a < rank)
                    w[N_ - 1 - a] = -1;
                slot_weight_.push_back(w);
            }
            break;
        }
    }

    neg_.resize(nroots);
    for (std::size_t r = 0; r < nroots; ++r) {
        Vec m = datum_.roots[r];
        for (auto& e : m) e = -e;
        auto idx = datum_.root_index(m);
        if (!idx) throw InternalError("root set not symmetric");
        neg_[r] = *idx;
    }

    X_.resize(nroots);
    x_plus_.resize(nroots);
    x_minus_.resize(nroots);
    n_.resize(nroots);
    n_inv_.resize(nroots);
    ready_.assign(nroots, 0);
}

void Realization::ensure(std::size_t root_idx) const {
    if (ready_.at(root_idx)) return;
    const std::size_t rank = datum_.rank();
    // Work on the positive root of the pair; both directions are built.
    std::size_t pos = datum_.coroot_is_positive(root_idx) ? root_idx : neg_[root_idx];

    // Root-space generators: for each of the two roots, solve for the
    // matrices supported on slots of matching torus weight that satisfy
    // m J + J m^T = 0.
    IntMatrix gen[2];
    std::size_t pair_idx[2] = {pos, neg_[pos]};
    for (int side = 0; side < 2; ++side) {
        std::size_t r = pair_idx[side];
        const Vec& alpha = datum_.roots[r];
        std::vector<std::pair<std::size_t, std::size_t>> slots;
        for (std::size_t a = 0; a < N_; ++a)
            for (std::size_t b = 0; b < N_; ++b) {
                if (a == b) continue;
                bool match = true;
                for (std::size_t i = 0; i < rank; ++i)
                    if (slot_weight_[a][i] - slot_weight_[b][i] != alpha[i]) match = false;
                if (match) slots.emplace_back(a, b);
            }
        if (slots.empty()) throw RealizationMismatch("no matrix slots for a root");

        std::vector<RatVec> basis;
        if (!has_form_) {
            basis.assign(1, RatVec(slots.size(), Rat(0)));
            if (slots.size() != 1) throw RealizationMismatch("GL root space not 1-dim");
            basis[0][0] = 1;
        } else {
            // Constraint C(m) = mJ + Jm^T = 0, stacked over all entries.
            RatMat sys(N_ * N_, RatVec(slots.size(), Rat(0)));
            for (std::size_t s = 0; s < slots.size(); ++s) {
                auto [a, b] = slots[s];
                IntMatrix E(N_, N_);
                E(a, b) = 1;
                IntMatrix C = E * J_ + J_ * E.transpose();
                for (std::size_t i = 0; i < N_; ++i)
                    for (std::size_t j = 0; j < N_; ++j)
                        sys[i * N_ + j][s] = Rat(C(i, j));
            }
            basis = nullspace(std::move(sys), slots.size());
        }
        if (basis.size() != 1) throw RealizationMismatch("root space dimension != 1");

        // Scale to a primitive integer vector with positive leading entry in
        // slot order (the canonical generator).
        Int lcm_den = 1;
        for (const Rat& v : basis[0])
            lcm_den = boost::multiprecision::lcm(lcm_den, boost::multiprecision::denominator(v));
        std::vector<Int> ints;
        Int g = 0;
        for (const Rat& v : basis[0]) {
            Int x = boost::multiprecision::numerator(v * Rat(lcm_den));
            ints.push_back(x);
            g = boost::multiprecision::gcd(g, x);
        }
        if (g == 0) throw RealizationMismatch("zero root-space generator");
        bool flip = false;
        for (const Int& x : ints) {
            if (x != 0) {
                flip = x < 0;
                break;
            }
        }
        IntMatrix G(N_, N_);
        for (std::size_t s = 0; s < slots.size(); ++s)
            G(slots[s].first, slots[s].second) = flip ? Int(-ints[s] / g) : Int(ints[s] / g);
        gen[side] = std::move(G);
    }

    // Chevalley normalization: keep the canonical generator on the positive
    // root and rescale the negative one so that [X_a, X_{-a}] = H_a.
    std::size_t nr = neg_[pos];
    IntMatrix H(N_, N_);
    for (std::size_t a = 0; a < N_; ++a) {
        Int v = 0;
        for (std::size_t i = 0; i < rank; ++i) v += slot_weight_[a][i] * datum_.coroots[pos][i];
        H(a, a) = v;
    }
    IntMatrix K = commutator(gen[0], gen[1]);
    // find rational c with K = c * H
    Rat c(0);
    for (std::size_t a = 0; a < N_; ++a)
        if (H(a, a) != 0) {
            c = Rat(K(a, a)) / Rat(H(a, a));
            break;
        }
    if (c == 0) throw RealizationMismatch("vanishing Chevalley pairing");
    IntMatrix Xneg(N_, N_);
    for (std::size_t i = 0; i < N_; ++i)
        for (std::size_t j = 0; j < N_; ++j) {
            Rat v = Rat(gen[1](i, j)) / c;
            if (boost::multiprecision::denominator(v) != 1)
                throw RealizationMismatch("non-integral negative generator");
            Xneg(i, j) = boost::multiprecision::numerator(v);
        }
    X_[pos] = gen[0];
    X_[nr] = Xneg;
    if (commutator(X_[pos], X_[nr]) != H) throw RealizationMismatch("[X_a, X_-a] != H_a");

    for (std::size_t q : pair_idx) {
        x_plus_[q] = exp_nilpotent(X_[q], 1);
        x_minus_[q] = exp_nilpotent(X_[q], -1);
        if (has_form_ && x_plus_[q] * J_ * x_plus_[q].transpose() != J_)
            throw RealizationMismatch("root element does not preserve the form");
    }
    for (std::size_t q : pair_idx) {
        n_[q] = x_plus_[q] * x_minus_[neg_[q]] * x_plus_[q];
        n_inv_[q] = x_minus_[q] * x_plus_[neg_[q]] * x_minus_[q];
        IntMatrix prod = n_[q] * n_inv_[q];
        if (prod != IntMatrix::identity(N_)) throw RealizationMismatch("n_alpha inverse");
    }
    ready_[pos] = 1;
    ready_[nr] = 1;
}

const IntMatrix& Realization::x_of(std::size_t root_idx, int t) const {
    ensure(root_idx);
    if (t == 1) return x_plus_.at(root_idx);
    if (t == -1) return x_minus_.at(root_idx);
    throw InternalError("x_of only tabulates t = +-1");
}

int Realization::sign(std::size_t alpha_idx, std::size_t beta_idx) const {
    auto key = std::make_pair(alpha_idx, beta_idx);
    auto it = sign_cache_.find(key);
    if (it != sign_cache_.end()) return it->second;

    Vec wbeta = datum_.reflection_on_X(alpha_idx).apply(datum_.roots[beta_idx]);
    auto target = datum_.root_index(wbeta);
    if (!target) throw InternalError("reflection left the root system");
    ensure(alpha_idx);
    ensure(beta_idx);
    ensure(*target);

    IntMatrix c1 = n_[alpha_idx] * x_plus_[beta_idx] * n_inv_[alpha_idx];
    int eps = 0;
    if (c1 == x_plus_[*target])
        eps = 1;
    else if (c1 == x_minus_[*target])
        eps = -1;
    else
        throw RealizationMismatch("conjugate is not a root-subgroup element");
    // cross-check at t = -1
    IntMatrix c2 = n_[alpha_idx] * x_minus_[beta_idx] * n_inv_[alpha_idx];
    if (c2 != (eps == 1 ? x_minus_[*target] : x_plus_[*target]))
        throw RealizationMismatch("sign inconsistent between t=1 and t=-1");
    sign_cache_[key] = eps;
    return eps;
}

ChevalleySignTable chevalley_signs(const RootDatum& datum) {
    Realization real(datum);
    ChevalleySignTable table;
    for (std::size_t a = 0; a < datum.roots.size(); ++a)
        for (std::size_t b = 0; b < datum.roots.size(); ++b)
            table.signs[{a, b}] = real.sign(a, b);
    return table;
}

}  // namespace bdcover
