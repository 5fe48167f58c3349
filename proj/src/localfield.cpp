#include "bdcover/localfield.hpp"

#include <cstdlib>
#include <sstream>

namespace bdcover {

std::size_t default_laurent_precision() {
    if (const char* env = std::getenv("BDCOVER_PRECISION")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 4) return static_cast<std::size_t>(v);
        return 4;
    }
    return 12;
}

// --- Laurent series ---------------------------------------------------------

template <class Ops>
LaurentSeries<Ops> LaurentSeries<Ops>::from_coefficients(Ops ops, long valuation,
                                                         std::vector<El> coeffs,
                                                         std::size_t precision) {
    if (precision < 1) throw InsufficientPrecision("precision must be positive");
    // The supplied list is exact: anything beyond it is zero.
    std::size_t lead = 0;
    while (lead < coeffs.size() && Ops::is_zero(coeffs[lead])) ++lead;
    if (lead == coeffs.size()) return zero(std::move(ops), precision);
    std::vector<El> c(precision, ops.zero());
    for (std::size_t i = lead; i < coeffs.size() && i - lead < precision; ++i)
        c[i - lead] = coeffs[i];
    return LaurentSeries(std::move(ops), valuation + static_cast<long>(lead), std::move(c),
                         precision, false);
}

template <class Ops>
typename Ops::El LaurentSeries<Ops>::coeff(long k) const {
    if (zero_) return ops_.zero();
    if (k < val_) return ops_.zero();
    if (k - val_ < static_cast<long>(prec_)) return c_[static_cast<std::size_t>(k - val_)];
    throw InsufficientPrecision("coefficient beyond the tracked window");
}

template <class Ops>
LaurentSeries<Ops> LaurentSeries<Ops>::operator+(const LaurentSeries& o) const {
    if (!(ops_ == o.ops_)) throw FieldMismatch("series over different base fields");
    if (zero_) return o;
    if (o.zero_) return *this;
    long v = std::min(val_, o.val_);
    long end = std::min(val_ + static_cast<long>(prec_), o.val_ + static_cast<long>(o.prec_));
    if (end <= v) throw InsufficientPrecision("sum windows do not overlap");
    std::vector<El> c;
    c.reserve(static_cast<std::size_t>(end - v));
    for (long k = v; k < end; ++k) {
        El a = k - val_ >= 0 && k - val_ < static_cast<long>(prec_)
                   ? c_[static_cast<std::size_t>(k - val_)]
                   : ops_.zero();
        El b = k - o.val_ >= 0 && k - o.val_ < static_cast<long>(o.prec_)
                   ? o.c_[static_cast<std::size_t>(k - o.val_)]
                   : ops_.zero();
        c.push_back(ops_.add(a, b));
    }
    std::size_t lead = 0;
    while (lead < c.size() && Ops::is_zero(c[lead])) ++lead;
    if (lead == c.size())
        throw InsufficientPrecision(
            "cancellation exhausted the tracked window (cannot certify zero)");
    c.erase(c.begin(), c.begin() + static_cast<long>(lead));
    std::size_t prec = c.size();
    return LaurentSeries(ops_, v + static_cast<long>(lead), std::move(c), prec, false);
}

template <class Ops>
LaurentSeries<Ops> LaurentSeries<Ops>::operator-() const {
    if (zero_) return *this;
    LaurentSeries out = *this;
    for (auto& x : out.c_) x = ops_.neg(x);
    return out;
}

template <class Ops>
LaurentSeries<Ops> LaurentSeries<Ops>::operator*(const LaurentSeries& o) const {
    if (!(ops_ == o.ops_)) throw FieldMismatch("series over different base fields");
    std::size_t prec = std::min(prec_, o.prec_);
    if (zero_ || o.zero_) return zero(ops_, prec == 0 ? std::max(prec_, o.prec_) : prec);
    std::vector<El> c(prec, ops_.zero());
    for (std::size_t i = 0; i < prec_ && i < prec; ++i)
        for (std::size_t j = 0; j < o.prec_ && i + j < prec; ++j)
            c[i + j] = ops_.add(c[i + j], ops_.mul(c_[i], o.c_[j]));
    // leading coefficients are nonzero in a field, so no renormalization
    return LaurentSeries(ops_, val_ + o.val_, std::move(c), prec, false);
}

template <class Ops>
LaurentSeries<Ops> LaurentSeries<Ops>::inverse() const {
    if (zero_) throw ZeroInput("inverse of the zero series");
    std::vector<El> c(prec_, ops_.zero());
    El lead_inv = ops_.inv(c_[0]);
    c[0] = lead_inv;
    for (std::size_t k = 1; k < prec_; ++k) {
        El acc = ops_.zero();
        for (std::size_t j = 1; j <= k; ++j) acc = ops_.add(acc, ops_.mul(c_[j], c[k - j]));
        c[k] = ops_.neg(ops_.mul(lead_inv, acc));
    }
    return LaurentSeries(ops_, -val_, std::move(c), prec_, false);
}

template <class Ops>
LaurentSeries<Ops> LaurentSeries<Ops>::pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    LaurentSeries out = constant(ops_, ops_.one(), prec_);
    LaurentSeries base = *this;
    while (e > 0) {
        if (e % 2 == 1) out = out * base;
        if (e /= 2) base = base * base;
    }
    return out;
}

template <class Ops>
std::string LaurentSeries<Ops>::describe() const {
    if (zero_) return "0";
    std::ostringstream out;
    out << "tau^" << val_ << " * (...)  [" << prec_ << " terms]";
    return out.str();
}

template <class Ops>
typename Ops::El residue_symbol(const LaurentSeries<Ops>& f, const LaurentSeries<Ops>& g) {
    if (f.is_zero() || g.is_zero()) throw ZeroInput("residue symbol of the zero series");
    long vf = f.valuation(), vg = g.valuation();
    LaurentSeries<Ops> h = f.pow(vg) * g.pow(-vf);
    typename Ops::El c = h.coeff(0);
    if ((vf % 2 != 0) && (vg % 2 != 0)) c = f.ops().neg(c);
    return c;
}

template class LaurentSeries<RatOps>;
template class LaurentSeries<GFqOps>;
template RatOps::El residue_symbol<RatOps>(const LaurentQ&, const LaurentQ&);
template GFqOps::El residue_symbol<GFqOps>(const LaurentF&, const LaurentF&);

// --- tame local fields -------------------------------------------------------

namespace {

bool is_prime(const Int& p) {
    if (p < 2) return false;
    for (Int d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

Int mod_pos(const Int& a, const Int& m) {
    Int r = a % m;
    if (r < 0) r += m;
    return r;
}

Int inv_mod(const Int& a, const Int& m) {
    Int old_r = mod_pos(a, m), r = m;
    Int old_s = 1, s = 0;
    while (r != 0) {
        Int q = old_r / r;
        Int tmp = old_r - q * r;
        old_r = r;
        r = tmp;
        tmp = old_s - q * s;
        old_s = s;
        s = tmp;
    }
    if (old_r != 1) throw ZeroInput("unit is not invertible modulo the precision modulus");
    return mod_pos(old_s, m);
}

}  // namespace

TameLocalField TameLocalField::padic(const Int& p, const Int& n, int unit_precision) {
    if (p < 3 || p % 2 == 0 || !is_prime(p))
        throw FieldMismatch("p-adic base requires an odd prime");
    if (n < 1 || (p - 1) % n != 0)
        throw FieldMismatch("cover degree must divide p - 1 (tameness)");
    Int um = 1;
    for (int i = 0; i < unit_precision; ++i) um *= p;
    auto res = std::make_shared<const GFq>(p.convert_to<long>());
    return TameLocalField(Kind::PAdic, std::move(res), n, std::move(um));
}

TameLocalField TameLocalField::fq_laurent(long q, const Int& n) {
    auto res = std::make_shared<const GFq>(q);
    if (n < 1 || (Int(q) - 1) % n != 0)
        throw FieldMismatch("cover degree must divide q - 1 (tameness)");
    return TameLocalField(Kind::FqLaurent, std::move(res), n, 0);
}

std::string TameLocalField::describe() const {
    std::ostringstream out;
    if (kind_ == Kind::PAdic)
        out << "Q_" << residue_->q();
    else
        out << "F_" << residue_->q() << "((t))";
    out << " with n=" << n_;
    return out.str();
}

LocalElem local_unit(const TameLocalField& K, const Int& u) {
    if (K.kind() == TameLocalField::Kind::PAdic) {
        Int uu = mod_pos(u, K.unit_modulus());
        if (uu % K.residue_card() == 0) throw ZeroInput("unit part divisible by p");
        return LocalElem{0, uu};
    }
    Int uu = mod_pos(u, K.residue_card());
    if (uu == 0) throw ZeroInput("zero is not a unit");
    return LocalElem{0, uu};
}

LocalElem local_uniformizer_pow(const TameLocalField& K, const Int& v, const Int& u) {
    LocalElem e = local_unit(K, u);
    e.val = v;
    return e;
}

LocalElem local_from_rational(const TameLocalField& K, const Rat& x) {
    if (K.kind() != TameLocalField::Kind::PAdic)
        throw FieldMismatch("rational embedding targets the p-adic kind");
    if (x == 0) throw ZeroInput("zero has no valuation data");
    Int p = K.residue_card();
    Int num = numerator(x), den = denominator(x);
    Int v = 0;
    while (num % p == 0) {
        num /= p;
        ++v;
    }
    while (den % p == 0) {
        den /= p;
        --v;
    }
    Int unit = mod_pos(num * inv_mod(den, K.unit_modulus()), K.unit_modulus());
    return LocalElem{v, unit};
}

LocalElem local_from_series(const TameLocalField& K, const LaurentF& f) {
    if (K.kind() != TameLocalField::Kind::FqLaurent)
        throw FieldMismatch("series embedding targets the Laurent kind");
    if (f.is_zero()) throw ZeroInput("zero has no valuation data");
    if (*f.ops().F != K.residue_field()) throw FieldMismatch("series over the wrong residue field");
    return LocalElem{f.valuation(), f.leading()};
}

LocalElem local_mul(const TameLocalField& K, const LocalElem& a, const LocalElem& b) {
    if (K.kind() == TameLocalField::Kind::PAdic)
        return LocalElem{a.val + b.val, mod_pos(a.unit * b.unit, K.unit_modulus())};
    const GFq& F = K.residue_field();
    return LocalElem{a.val + b.val,
                     Int(F.mul(static_cast<int>(a.unit.convert_to<long>()),
                               static_cast<int>(b.unit.convert_to<long>())))};
}

LocalElem local_inv(const TameLocalField& K, const LocalElem& a) {
    if (K.kind() == TameLocalField::Kind::PAdic)
        return LocalElem{-a.val, inv_mod(a.unit, K.unit_modulus())};
    const GFq& F = K.residue_field();
    return LocalElem{-a.val, Int(F.inv(static_cast<int>(a.unit.convert_to<long>())))};
}

int local_unit_residue(const TameLocalField& K, const LocalElem& a) {
    if (K.kind() == TameLocalField::Kind::PAdic)
        return K.residue_field().from_int(a.unit);
    return static_cast<int>(a.unit.convert_to<long>());
}

RootOfUnityIndex tame_hilbert(const LocalElem& a, const LocalElem& b, const TameLocalField& K) {
    const GFq& F = K.residue_field();
    int ra = local_unit_residue(K, a);
    int rb = local_unit_residue(K, b);
    if (ra == 0 || rb == 0) throw ZeroInput("tame symbol of a non-unit residue");
    int r = F.mul(F.pow(ra, b.val), F.pow(rb, -a.val));
    if (a.val % 2 != 0 && b.val % 2 != 0) r = F.mul(r, F.from_int(-1));
    Int idx = mod_pos(Int(F.dlog(r)), K.n());
    return RootOfUnityIndex{K.n(), idx};
}

// --- torus covers ------------------------------------------------------------

TorusCoverElement torus_cover_element(const TameLocalField& K, const CoeffElem& zeta,
                                      std::vector<LocalElem> point) {
    if (zeta.group() != CoeffGroup::mu_n(K.n()))
        throw CoeffMismatch("cover component must live in mu_n of the field");
    return TorusCoverElement{K, zeta, std::move(point)};
}

TorusCoverElement torus_cover_identity(const TameLocalField& K, std::size_t rank) {
    auto mun = CoeffGroup::mu_n(K.n());
    return TorusCoverElement{K, CoeffElem::zero(mun),
                             std::vector<LocalElem>(rank, local_unit(K, 1))};
}

CoeffElem torus_cocycle(const TameLocalField& K, const QuadraticForm& Q,
                        const std::vector<LocalElem>& s, const std::vector<LocalElem>& t) {
    std::size_t r = Q.rank();
    if (s.size() != r || t.size() != r) throw DimensionMismatch("torus point rank");
    auto mun = CoeffGroup::mu_n(K.n());
    CoeffElem acc = CoeffElem::zero(mun);
    for (std::size_t i = 0; i < r; ++i)
        acc = acc + CoeffElem::residue(mun, tame_hilbert(s[i], t[i], K).idx * Q.diag[i]);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = i + 1; j < r; ++j)
            acc = acc +
                  CoeffElem::residue(mun, tame_hilbert(s[i], t[j], K).idx * Q.offdiag(i, j));
    return acc;
}

TorusCoverElement torus_cover_mul(const TorusCoverElement& x, const TorusCoverElement& y,
                                  const QuadraticForm& Q) {
    if (x.field != y.field) throw FieldMismatch("cover elements over different fields");
    if (x.point.size() != y.point.size()) throw DimensionMismatch("torus point rank");
    std::vector<LocalElem> pt;
    pt.reserve(x.point.size());
    for (std::size_t i = 0; i < x.point.size(); ++i)
        pt.push_back(local_mul(x.field, x.point[i], y.point[i]));
    CoeffElem zeta = x.zeta + y.zeta + torus_cocycle(x.field, Q, x.point, y.point);
    return TorusCoverElement{x.field, zeta, std::move(pt)};
}

TorusCoverElement torus_cover_inv(const TorusCoverElement& x, const QuadraticForm& Q) {
    std::vector<LocalElem> pt;
    pt.reserve(x.point.size());
    for (const auto& e : x.point) pt.push_back(local_inv(x.field, e));
    CoeffElem zeta = -x.zeta - torus_cocycle(x.field, Q, x.point, pt);
    return TorusCoverElement{x.field, zeta, std::move(pt)};
}

CoeffElem torus_cover_commutator(const TorusCoverElement& x, const TorusCoverElement& y,
                                 const QuadraticForm& Q) {
    if (x.field != y.field) throw FieldMismatch("cover elements over different fields");
    return torus_cocycle(x.field, Q, x.point, y.point) -
           torus_cocycle(x.field, Q, y.point, x.point);
}

}  // namespace bdcover
