#pragma once

#include <map>
#include <memory>

#include "bdcover/rootdatum.hpp"

namespace bdcover {

/// Fixed matrix realization of a classical root datum: GL_n standard,
/// Sp_{2n} with the antidiagonal symplectic form, SO_m with the antidiagonal
/// symmetric form (middle coefficient 2 in odd dimension, so that the
/// Chevalley root elements stay integral).  Provides the root one-parameter
/// matrices x_alpha(+-1), the Weyl representatives n_alpha(1), and the
/// structure signs eps_{alpha,beta} read off from conjugation.
class Realization {
public:
    explicit Realization(const RootDatum& datum);

    const RootDatum& datum() const { return datum_; }
    std::size_t dim() const { return N_; }
    bool has_form() const { return has_form_; }
    const IntMatrix& form() const { return J_; }

    /// Nilpotent Chevalley generator X_alpha (integer matrix).
    const IntMatrix& chevalley_X(std::size_t root_idx) const {
        ensure(root_idx);
        return X_.at(root_idx);
    }
    /// x_alpha(t) for t in {+1, -1}.
    const IntMatrix& x_of(std::size_t root_idx, int t) const;
    /// n_alpha(1) = x_alpha(1) x_{-alpha}(-1) x_alpha(1) and its inverse.
    const IntMatrix& n_of(std::size_t root_idx) const {
        ensure(root_idx);
        return n_.at(root_idx);
    }
    const IntMatrix& n_inv_of(std::size_t root_idx) const {
        ensure(root_idx);
        return n_inv_.at(root_idx);
    }

    /// Index of -alpha.
    std::size_t negative_of(std::size_t root_idx) const { return neg_.at(root_idx); }

    /// The sign eps_{alpha,beta} defined by
    /// n_alpha(1) x_beta(t) n_alpha(1)^{-1} = x_{w_alpha(beta)}(eps * t),
    /// verified at t = +1 and t = -1.  Cached.
    int sign(std::size_t alpha_idx, std::size_t beta_idx) const;

private:
    /// Materialize the generator, one-parameter matrices, and Weyl
    /// representative for a root (and its negative).  Lazy so that large
    /// data only pay for the roots actually consulted.
    void ensure(std::size_t root_idx) const;

    RootDatum datum_;
    std::size_t N_ = 0;
    bool has_form_ = false;
    IntMatrix J_;
    std::vector<Vec> slot_weight_;  // X-vector per matrix slot
    mutable std::vector<IntMatrix> X_, x_plus_, x_minus_, n_, n_inv_;
    mutable std::vector<char> ready_;
    std::vector<std::size_t> neg_;
    mutable std::map<std::pair<std::size_t, std::size_t>, int> sign_cache_;
};

/// Full sign table (all ordered root pairs); intended for small rank.
struct ChevalleySignTable {
    std::map<std::pair<std::size_t, std::size_t>, int> signs;
};

ChevalleySignTable chevalley_signs(const RootDatum& datum);

}  // namespace bdcover
