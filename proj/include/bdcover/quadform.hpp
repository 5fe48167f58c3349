#pragma once

#include "bdcover/rootdatum.hpp"

namespace bdcover {

/// Integer quadratic form on a free lattice, stored as the values on the
/// basis (diag_i = Q(e_i)) together with the polarization cross terms
/// (offdiag(i,j) = B_Q(e_i,e_j) for i<j; kept symmetric internally):
///   Q(y) = sum_i diag_i y_i^2 + sum_{i<j} offdiag_{ij} y_i y_j,
///   B_Q(y1,y2) = Q(y1+y2) - Q(y1) - Q(y2),  B_Q(y,y) = 2 Q(y).
struct QuadraticForm {
    Lattice lattice;
    std::vector<Int> diag;
    IntMatrix offdiag;  ///< symmetric, zero diagonal

    static QuadraticForm zero(std::size_t rank);
    /// a * sum y_i^2.
    static QuadraticForm diagonal(std::size_t rank, const Int& a);

    std::size_t rank() const { return lattice.rank; }
    bool operator==(const QuadraticForm& o) const {
        return diag == o.diag && offdiag == o.offdiag;
    }
};

Int eval_Q(const QuadraticForm& Q, const Vec& y);
Int eval_B(const QuadraticForm& Q, const Vec& y1, const Vec& y2);

/// Q pulled back along the lattice map y -> M y (M columns = images).
QuadraticForm pullback_form(const QuadraticForm& Q, const IntMatrix& M);

/// Direct sum Q1 (+) Q2 on the concatenated basis.
QuadraticForm direct_sum_form(const QuadraticForm& Q1, const QuadraticForm& Q2);

/// Rational basis of the space of Weyl-invariant quadratic forms on Y,
/// each returned as the parameter vector (diag_0..diag_{r-1},
/// offdiag_{01}, offdiag_{02}, ..., offdiag_{r-2,r-1}).  For the GL family
/// the cross terms form a second invariant direction; when
/// require_decomposable is set the cross terms are constrained to zero.
std::vector<std::vector<Rat>> invariant_form_space(const RootDatum& datum,
                                                   bool require_decomposable);

/// The unique W-invariant integer form with the family's scale parameter a:
/// GL: a * sum y_i^2 (cross terms zero, the decomposable choice);
/// Sp (C): a * sum y_i^2, so the short coroots e_i get value a;
/// SO (B, D): (a/2) * sum y_i^2, which is integral on Y only when a is
/// even — odd a raises ParityViolation.
/// The result is checked against the invariance solver and against every
/// simple reflection before being returned.
QuadraticForm weyl_invariant_form(const RootDatum& datum, const Int& a);

/// n_Q = n / gcd(n, Q(alpha_check)) for the reference coroot of the datum:
/// the first simple coroot when the rank is at least two, the unique
/// positive coroot in rank one, and the convention Q(alpha_check) = 2 diag_0
/// for the torus GL_1.  For rank >= 2 the reference value must be even.
Int compute_nQ(const Int& n, const QuadraticForm& Q, const RootDatum& datum);

/// True iff B_Q vanishes across the given partition of the basis
/// (part[i] = block id of basis vector i).
bool is_decomposable(const QuadraticForm& Q, const std::vector<std::size_t>& part);

}  // namespace bdcover
