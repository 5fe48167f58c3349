#pragma once

#include <memory>
#include <string>
#include <vector>

#include "bdcover/gfq.hpp"
#include "bdcover/quadform.hpp"

namespace bdcover {

/// Working precision (number of tracked coefficients) for Laurent series:
/// the BDCOVER_PRECISION environment variable when set (minimum 4),
/// otherwise 12.
std::size_t default_laurent_precision();

/// Coefficient operations over the rationals.
struct RatOps {
    using El = Rat;
    static El zero() { return Rat(0); }
    static El one() { return Rat(1); }
    static El add(const El& a, const El& b) { return a + b; }
    static El neg(const El& a) { return -a; }
    static El mul(const El& a, const El& b) { return a * b; }
    static El inv(const El& a) {
        if (a == 0) throw ZeroInput("inverse of zero");
        return Rat(1) / a;
    }
    static bool is_zero(const El& a) { return a == 0; }
    bool operator==(const RatOps&) const { return true; }
};

/// Coefficient operations over a finite field (shared descriptor).
struct GFqOps {
    std::shared_ptr<const GFq> F;
    using El = int;
    El zero() const { return 0; }
    El one() const { return 1; }
    El add(El a, El b) const { return F->add(a, b); }
    El neg(El a) const { return F->neg(a); }
    El mul(El a, El b) const { return F->mul(a, b); }
    El inv(El a) const { return F->inv(a); }
    static bool is_zero(El a) { return a == 0; }
    bool operator==(const GFqOps& o) const { return *F == *o.F; }
};

/// Truncated Laurent series sum_{i >= v} c_i tau^i with exactly `precision`
/// tracked coefficients from the valuation up.  The zero series is tracked
/// separately; a nonzero series always has a nonzero leading coefficient.
/// Arithmetic keeps the shortest honest precision of its inputs; asking for
/// structure the tracked window cannot certify raises InsufficientPrecision.
template <class Ops>
class LaurentSeries {
public:
    using El = typename Ops::El;

    static LaurentSeries zero(Ops ops, std::size_t precision) {
        return LaurentSeries(std::move(ops), 0, {}, precision, true);
    }
    static LaurentSeries constant(Ops ops, const El& c, std::size_t precision) {
        if (Ops::is_zero(c)) return zero(std::move(ops), precision);
        std::vector<El> cs(precision, ops.zero());
        cs[0] = c;
        return LaurentSeries(std::move(ops), 0, std::move(cs), precision, false);
    }
    /// tau^k.
    static LaurentSeries variable_power(Ops ops, long k, std::size_t precision) {
        std::vector<El> cs(precision, ops.zero());
        cs[0] = ops.one();
        return LaurentSeries(std::move(ops), k, std::move(cs), precision, false);
    }
    /// Series from explicit coefficients starting at the given valuation
    /// (normalized; InsufficientPrecision if all supplied terms vanish but
    /// the list was shorter than the precision, i.e. zero cannot be
    /// certified).
    static LaurentSeries from_coefficients(Ops ops, long valuation, std::vector<El> coeffs,
                                           std::size_t precision);

    bool is_zero() const { return zero_; }
    long valuation() const {
        if (zero_) throw ZeroInput("valuation of the zero series");
        return val_;
    }
    std::size_t precision() const { return prec_; }
    const Ops& ops() const { return ops_; }

    /// Coefficient of tau^k; InsufficientPrecision beyond the window.
    El coeff(long k) const;
    El leading() const {
        if (zero_) throw ZeroInput("leading coefficient of the zero series");
        return c_[0];
    }

    LaurentSeries operator+(const LaurentSeries& o) const;
    LaurentSeries operator-() const;
    LaurentSeries operator-(const LaurentSeries& o) const { return *this + (-o); }
    LaurentSeries operator*(const LaurentSeries& o) const;
    LaurentSeries inverse() const;
    LaurentSeries pow(long e) const;

    std::string describe() const;

private:
    LaurentSeries(Ops ops, long val, std::vector<El> c, std::size_t prec, bool z)
        : ops_(std::move(ops)), val_(val), c_(std::move(c)), prec_(prec), zero_(z) {}

    Ops ops_;
    long val_ = 0;
    std::vector<El> c_;  // c_[i] = coefficient of tau^{val_ + i}
    std::size_t prec_;
    bool zero_;
};

using LaurentQ = LaurentSeries<RatOps>;
using LaurentF = LaurentSeries<GFqOps>;

/// Res(f, g) = (-1)^{v(f) v(g)} (f^{v(g)} / g^{v(f)})(0): the constant term
/// of the displayed unit, an exact base-field element.
template <class Ops>
typename Ops::El residue_symbol(const LaurentSeries<Ops>& f, const LaurentSeries<Ops>& g);

extern template class LaurentSeries<RatOps>;
extern template class LaurentSeries<GFqOps>;
extern template RatOps::El residue_symbol<RatOps>(const LaurentQ&, const LaurentQ&);
extern template GFqOps::El residue_symbol<GFqOps>(const LaurentF&, const LaurentF&);

/// Local field with tame covering data: Q_p (p an odd prime) or F_q((t)),
/// with a cover degree n dividing the order of the residue multiplicative
/// group (which makes the residue characteristic prime to n).
class TameLocalField {
public:
    enum class Kind { PAdic, FqLaurent };

    static TameLocalField padic(const Int& p, const Int& n, int unit_precision = 8);
    static TameLocalField fq_laurent(long q, const Int& n);

    Kind kind() const { return kind_; }
    /// Residue field cardinality q*.
    Int residue_card() const { return Int(residue_->q()); }
    const Int& n() const { return n_; }
    const GFq& residue_field() const { return *residue_; }
    std::shared_ptr<const GFq> residue_field_ptr() const { return residue_; }
    /// p-adic unit modulus p^N.
    const Int& unit_modulus() const { return unit_mod_; }

    bool operator==(const TameLocalField& o) const {
        return kind_ == o.kind_ && residue_->q() == o.residue_->q() && n_ == o.n_;
    }
    bool operator!=(const TameLocalField& o) const { return !(*this == o); }

    std::string describe() const;

private:
    TameLocalField(Kind k, std::shared_ptr<const GFq> res, Int n, Int um)
        : kind_(k), residue_(std::move(res)), n_(std::move(n)), unit_mod_(std::move(um)) {}

    Kind kind_;
    std::shared_ptr<const GFq> residue_;
    Int n_;
    Int unit_mod_;  // p^N for PAdic; unused for FqLaurent
};

/// Nonzero element u * pi^val of a tame local field.  For Q_p the unit is an
/// integer mod p^N coprime to p; for F_q((t)) only the leading residue of
/// the unit is kept (all tame data factors through it).
struct LocalElem {
    Int val;
    Int unit;
};

LocalElem local_from_rational(const TameLocalField& K, const Rat& x);
LocalElem local_from_series(const TameLocalField& K, const LaurentF& f);
LocalElem local_unit(const TameLocalField& K, const Int& u);  ///< valuation 0
LocalElem local_uniformizer_pow(const TameLocalField& K, const Int& v, const Int& u);
LocalElem local_mul(const TameLocalField& K, const LocalElem& a, const LocalElem& b);
LocalElem local_inv(const TameLocalField& K, const LocalElem& a);
/// Residue-field index of the unit part.
int local_unit_residue(const TameLocalField& K, const LocalElem& a);

/// Element of mu_n by exponent index.
struct RootOfUnityIndex {
    Int n;
    Int idx;  // canonical 0 <= idx < n

    bool operator==(const RootOfUnityIndex& o) const { return n == o.n && idx == o.idx; }
};

/// Tame n-th Hilbert symbol: the tame symbol
/// (-1)^{v(a) v(b)} a^{v(b)} / b^{v(a)} reduced to the residue field, then
/// indexed in mu_n through the (q*-1)/n-th power of the fixed generator.
RootOfUnityIndex tame_hilbert(const LocalElem& a, const LocalElem& b, const TameLocalField& K);

/// Element of the degree-n cover of a rank-r split torus: a mu_n component
/// and the underlying torus point.
struct TorusCoverElement {
    TameLocalField field;
    CoeffElem zeta;  // in MuN(n)
    std::vector<LocalElem> point;
};

TorusCoverElement torus_cover_element(const TameLocalField& K, const CoeffElem& zeta,
                                      std::vector<LocalElem> point);
TorusCoverElement torus_cover_identity(const TameLocalField& K, std::size_t rank);

/// Cover cocycle sigma(s, t) = prod_i (s_i, t_i)^{Q(e_i)}
/// * prod_{i<j} (s_i, t_j)^{B(e_i, e_j)} (fan ordering matching the
/// standard lattice cocycle).
CoeffElem torus_cocycle(const TameLocalField& K, const QuadraticForm& Q,
                        const std::vector<LocalElem>& s, const std::vector<LocalElem>& t);

TorusCoverElement torus_cover_mul(const TorusCoverElement& x, const TorusCoverElement& y,
                                  const QuadraticForm& Q);
TorusCoverElement torus_cover_inv(const TorusCoverElement& x, const QuadraticForm& Q);
/// x y x^{-1} y^{-1}, central: sigma(s,t) - sigma(t,s).
CoeffElem torus_cover_commutator(const TorusCoverElement& x, const TorusCoverElement& y,
                                 const QuadraticForm& Q);

}  // namespace bdcover
