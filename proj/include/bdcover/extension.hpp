#pragma once

#include <optional>
#include <string>

#include "bdcover/quadform.hpp"

namespace bdcover {

/// How an extension's cocycle was produced (provenance only; the stored data
/// is the same in every case).
enum class CocycleKind { StandardFromQ, ExplicitTable, TwistedProduct, Derived };

/// Central extension 1 -> A -> E -> Z^rank -> 1 presented by a normalized
/// 2-cocycle.  Every cocycle handled here is bilinear in the coordinates:
///   sigma(y1, y2) = sum_{i,j} y1_i y2_j K_ij   (A written additively),
/// which is closed under all the constructions below, since a coboundary
/// with bilinear difference is itself a symmetric bilinear matrix.
/// Commutator of lifts: [y1, y2] = sum y1_i y2_j (K_ij - K_ji).
class Extension {
public:
    using CoeffMatrix = std::vector<std::vector<CoeffElem>>;

    Extension(std::size_t rank, CoeffGroup coeff, CoeffMatrix K,
              CocycleKind kind = CocycleKind::ExplicitTable);

    /// sigma(y1,y2) = (-1)^{sum_{i>j} B_ij y1_i y2_j} from the polarization
    /// of Q (lower-triangular fan ordering; requires -1 in the group).
    /// Asserts commutator == (-1)^{B_Q} on a basis window.
    static Extension standard_from_q(const QuadraticForm& Q, const CoeffGroup& coeff);
    static Extension split(std::size_t rank, const CoeffGroup& coeff);

    std::size_t rank() const { return rank_; }
    const CoeffGroup& coeff() const { return coeff_; }
    const CoeffMatrix& table() const { return K_; }
    CocycleKind kind() const { return kind_; }

    CoeffElem sigma(const Vec& y1, const Vec& y2) const;
    CoeffElem commutator_value(const Vec& y1, const Vec& y2) const;

    bool operator==(const Extension& o) const {
        return rank_ == o.rank_ && coeff_ == o.coeff_ && K_ == o.K_;
    }
    bool operator!=(const Extension& o) const { return !(*this == o); }

private:
    std::size_t rank_;
    CoeffGroup coeff_;
    CoeffMatrix K_;
    CocycleKind kind_;
};

/// Group element (c, y) of an extension; (c1,y1)(c2,y2) =
/// (c1+c2+sigma(y1,y2), y1+y2).
struct ExtElement {
    Extension ext;
    CoeffElem coeff;
    Vec point;
};

ExtElement ext_identity(const Extension& E);
ExtElement ext_element(const Extension& E, const CoeffElem& c, Vec y);
ExtElement ext_mul(const ExtElement& x, const ExtElement& y);
ExtElement ext_inv(const ExtElement& x);
ExtElement ext_pow(const ExtElement& x, const Int& n);
/// x y x^{-1} y^{-1}, central, returned as a coefficient.
CoeffElem ext_commutator(const ExtElement& x, const ExtElement& y);

/// Baer sum of n copies of E, computed structurally: pr_* of the n-fold
/// block extension pulled back along the diagonal Y -> Y^n.
Extension baer_sum_n(const Extension& E, const Int& n);
/// Pushout of E along the endomorphism [m] of A: cocycle raised to the m-th
/// power entrywise.
Extension pushout_m(const Extension& E, const Int& m);
/// Pullback along a lattice map into E's lattice: sigma'(y,y') =
/// sigma(h(y), h(y')).
Extension pullback_ext(const Extension& E, const LatticeHom& h);
/// Block extension over Y1 (+) Y2 (the pushout of E1 (+) E2 along the
/// product map of the two coefficient copies).
Extension pr_star(const Extension& E1, const Extension& E2);

/// Element of pr_*(E1 (+) E2) in canonical form: the class of (x, e1, e2)
/// modulo (x t^{-1} s^{-1}, e1 t, e2 s) is determined by the image
/// (y1, y2) together with the accumulated coefficient x + c1 + c2.
struct PrStarElement {
    Extension parent1, parent2;
    CoeffElem coeff;  ///< canonical accumulated coefficient
    Vec y1, y2;
};

PrStarElement prstar_element(const Extension& E1, const Extension& E2, const CoeffElem& x,
                             const ExtElement& e1, const ExtElement& e2);
bool prstar_equal(const PrStarElement& a, const PrStarElement& b);
PrStarElement prstar_mul(const PrStarElement& a, const PrStarElement& b);
PrStarElement prstar_inv(const PrStarElement& a);
/// (x, e1, e2) -> x e1 e2 computed in the common parent E; requires
/// parent1 == parent2.
ExtElement mul_map(const PrStarElement& p);

/// Odd-orthogonal auxiliary product on Y1 (+) Y2 (+) Z e_extra: the block
/// cocycle of E1, E2 twisted by (-1)^{B_{Q_square}((y1,y2,0), a' e_extra)}
/// where a' is the extra coordinate of the right factor.  Q_square must be
/// a form on the full rank1 + rank2 + 1 lattice.
Extension twisted_product_ext(const Extension& E1, const Extension& E2,
                              const QuadraticForm& Q_square);

/// Isomorphism witness between two extensions over the same lattice:
/// phi(c, y) = (c + beta(y) + chi(y), y) with
///   beta(y) = sum_i C(y_i, 2) S_ii + sum_{i<j} y_i y_j S_ij
/// for the symmetric matrix S (so that sigma' = sigma + d(beta)), and chi a
/// character of Y fixing the distinguished-element discrepancy.
struct IsoWitness {
    Extension::CoeffMatrix S;  ///< symmetric coboundary matrix
    Character chi;
};

CoeffElem iso_beta_eval(const IsoWitness& w, const Vec& y);
/// Full transported element: c + beta(y) + chi(y).
ExtElement iso_apply(const IsoWitness& w, const Extension& target, const ExtElement& x);

/// Find (beta, chi) with sigma' = sigma + d(beta) and, for each k,
/// phi(f_k at point sc_incl(e_k)) having coefficient f'_k.  The f-tables
/// give the coefficients of the distinguished lifts over the images of the
/// basis of the sub-lattice.  Returns nullopt when no witness exists
/// (never for QmodZ coefficients with matching cocycle classes).
std::optional<IsoWitness> iso_extensions(const Extension& E, const Extension& Eprime,
                                         const std::vector<CoeffElem>& f_values,
                                         const std::vector<CoeffElem>& fprime_values,
                                         const LatticeHom& sc_incl);

/// TSV rows "y1 <TAB> y2 <TAB> value" over the coordinate window
/// {-window..window}^rank.
std::string cocycle_table_tsv(const Extension& E, long window);

}  // namespace bdcover
