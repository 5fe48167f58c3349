#pragma once

#include <string>
#include <vector>

#include "bdcover/intmat.hpp"

namespace bdcover {

/// Finite field F_q (q = p^k) with elements addressed by integer indices:
/// the element sum c_0 + c_1 x + ... + c_{k-1} x^{k-1} has index
/// sum c_i p^i, so 0 and 1 are the additive and multiplicative identities
/// and the indices 0..p-1 form the prime subfield.  The modulus is the
/// deterministic first monic irreducible polynomial of degree k in the
/// (constant term, then ascending coefficients) ordering.
class GFq {
public:
    explicit GFq(long q);

    long q() const { return q_; }
    long p() const { return p_; }
    int degree() const { return k_; }

    int add(int a, int b) const;
    int sub(int a, int b) const;
    int neg(int a) const;
    int mul(int a, int b) const;
    /// Multiplicative inverse; ZeroInput on 0.
    int inv(int a) const;
    /// a^e with arbitrary integer exponent (negative allowed, a != 0 then).
    int pow(int a, const Int& e) const;

    /// Prime-subfield embedding of an integer residue.
    int from_int(const Int& c) const;

    /// A fixed generator of the multiplicative group (smallest index).
    int generator() const { return gen_; }
    /// Discrete logarithm base generator(); ZeroInput on 0.
    long dlog(int a) const;

    /// Coefficients of the modulus polynomial, constant term first.
    const std::vector<int>& modulus() const { return mod_; }

    std::string describe() const;
    std::string element_name(int a) const;

    bool operator==(const GFq& o) const { return q_ == o.q_; }
    bool operator!=(const GFq& o) const { return q_ != o.q_; }

private:
    std::vector<int> digits(int a) const;
    int index_of(const std::vector<int>& d) const;

    long q_, p_;
    int k_;
    std::vector<int> mod_;   // monic, length k_+1, constant first
    std::vector<int> inv_;   // cached inverses
    std::vector<long> dlog_;  // cached logs
    std::vector<int> add_tab_, mul_tab_, neg_tab_;  // small-field op tables
    int gen_;
};

}  // namespace bdcover
