#pragma once

#include <optional>
#include <string>

#include "bdcover/intmat.hpp"

namespace bdcover {

/// Abelian coefficient group standing in for the multiplicative group of a
/// separably closed field.  All three kinds are written additively inside the
/// library: MuN(N) and UnitsFq(q) are Z/N and Z/(q-1); QmodZ is Q/Z with
/// values stored as exact rationals in [0,1).  The group operation models
/// multiplication of roots of unity.
class CoeffGroup {
public:
    enum class Kind { MuN, QmodZ, UnitsFq };

    static CoeffGroup mu_n(const Int& n) {
        if (n <= 0) throw DimensionMismatch("MuN requires N >= 1");
        return CoeffGroup(Kind::MuN, n);
    }
    static CoeffGroup q_mod_z() { return CoeffGroup(Kind::QmodZ, 0); }
    static CoeffGroup units_fq(const Int& q) {
        if (q <= 1) throw DimensionMismatch("UnitsFq requires q >= 2");
        return CoeffGroup(Kind::UnitsFq, q - 1);
    }

    Kind kind() const { return kind_; }
    bool finite() const { return kind_ != Kind::QmodZ; }
    /// Order of the finite cyclic kinds (N or q-1).
    const Int& order() const { return order_; }

    bool operator==(const CoeffGroup& o) const {
        return kind_ == o.kind_ && order_ == o.order_;
    }
    bool operator!=(const CoeffGroup& o) const { return !(*this == o); }

    std::string describe() const;

private:
    CoeffGroup(Kind k, Int order) : kind_(k), order_(std::move(order)) {}
    Kind kind_;
    Int order_;  // N for MuN, q-1 for UnitsFq, unused for QmodZ
};

/// Element of a CoeffGroup in canonical form.  For the cyclic kinds the
/// value is k/N with 0 <= k < N; for QmodZ any rational reduced to [0,1).
class CoeffElem {
public:
    CoeffElem(CoeffGroup group, Rat value) : group_(group), value_(reduce(group, value)) {}

    static CoeffElem zero(const CoeffGroup& g) { return CoeffElem(g, Rat(0)); }
    /// Residue-class constructor for the cyclic kinds: index k in Z/order.
    static CoeffElem residue(const CoeffGroup& g, const Int& k) {
        if (!g.finite()) throw CoeffMismatch("residue constructor needs a finite cyclic group");
        return CoeffElem(g, Rat(k, g.order()));
    }
    /// The element of order two (the root of unity -1); requires 2 | order
    /// for the finite kinds.
    static CoeffElem minus_one(const CoeffGroup& g) {
        if (g.finite() && g.order() % 2 != 0)
            throw CoeffMismatch("no element of order 2 in " + g.describe());
        return CoeffElem(g, Rat(1, 2));
    }
    /// (-1)^e for an integer exponent e.
    static CoeffElem sign_power(const CoeffGroup& g, const Int& e) {
        return e % 2 == 0 ? zero(g) : minus_one(g);
    }

    const CoeffGroup& group() const { return group_; }
    const Rat& value() const { return value_; }
    bool is_zero() const { return value_ == 0; }

    CoeffElem operator+(const CoeffElem& o) const {
        require_same(o);
        return CoeffElem(group_, value_ + o.value_);
    }
    CoeffElem operator-(const CoeffElem& o) const {
        require_same(o);
        return CoeffElem(group_, value_ - o.value_);
    }
    CoeffElem operator-() const { return CoeffElem(group_, -value_); }
    CoeffElem times(const Int& n) const { return CoeffElem(group_, value_ * Rat(n)); }

    bool operator==(const CoeffElem& o) const {
        return group_ == o.group_ && value_ == o.value_;
    }
    bool operator!=(const CoeffElem& o) const { return !(*this == o); }

    /// Solve n*x = this in the group; returns one solution if any exists.
    /// QmodZ is divisible so a solution always exists; in Z/N the equation
    /// is solvable iff gcd(n, N) divides the residue index.
    std::optional<CoeffElem> divide(const Int& n) const;

    std::string describe() const;

private:
    static Rat reduce(const CoeffGroup& g, Rat v);
    void require_same(const CoeffElem& o) const {
        if (group_ != o.group_) throw CoeffMismatch("elements of different coefficient groups");
    }
    CoeffGroup group_;
    Rat value_;
};

}  // namespace bdcover
