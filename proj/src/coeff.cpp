#include "bdcover/coeff.hpp"

#include <boost/multiprecision/cpp_int.hpp>

namespace bdcover {

namespace {

Int mod_floor(const Int& a, const Int& m) {
    Int r = a % m;
    if (r < 0) r += m;
    return r;
}

// Extended gcd: returns g and x with a*x = g (mod m).
Int mod_inverse(const Int& a, const Int& m) {
    Int old_r = mod_floor(a, m), r = m;
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
    if (old_r != 1) throw InternalError("mod_inverse of non-unit");
    return mod_floor(old_s, m);
}

}  // namespace

std::string CoeffGroup::describe() const {
    switch (kind_) {
        case Kind::MuN:
            return "mu_" + order_.str();
        case Kind::QmodZ:
            return "Q/Z";
        case Kind::UnitsFq:
            return "F_" + Int(order_ + 1).str() + "^x";
    }
    return "?";
}

Rat CoeffElem::reduce(const CoeffGroup& g, Rat v) {
    if (g.finite()) {
        // force denominator to divide the group order
        Rat scaled = v * Rat(g.order());
        if (boost::multiprecision::denominator(scaled) != 1)
            throw CoeffMismatch("value is not a " + g.describe() + " element");
        Int k = mod_floor(boost::multiprecision::numerator(scaled), g.order());
        return Rat(k, g.order());
    }
    // Q/Z: reduce to [0,1)
    Int num = boost::multiprecision::numerator(v);
    Int den = boost::multiprecision::denominator(v);
    return Rat(mod_floor(num, den), den);
}

std::optional<CoeffElem> CoeffElem::divide(const Int& n) const {
    if (n == 0) {
        if (is_zero()) return zero(group_);
        return std::nullopt;
    }
    if (!group_.finite()) return CoeffElem(group_, value_ / Rat(n));
    const Int N = group_.order();
    Int k = boost::multiprecision::numerator(value_ * Rat(N));
    Int nn = mod_floor(n, N);
    if (nn == 0) return is_zero() ? std::optional<CoeffElem>(zero(group_)) : std::nullopt;
    Int g = boost::multiprecision::gcd(nn, N);
    if (k % g != 0) return std::nullopt;
    Int inv = mod_inverse(nn / g, N / g);
    Int j = mod_floor((k / g) * inv, N / g);
    return CoeffElem(group_, Rat(j, N));
}

std::string CoeffElem::describe() const {
    return value_.str() + " in " + group_.describe();
}

}  // namespace bdcover
