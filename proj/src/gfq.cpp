#include "bdcover/gfq.hpp"

#include <numeric>
#include <sstream>

namespace bdcover {

namespace {

using Poly = std::vector<int>;  // coefficients mod p, constant first

Poly trim(Poly a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
    return a;
}

Poly poly_mul(const Poly& a, const Poly& b, long p) {
    if (a.empty() || b.empty()) return {};
    Poly out(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            out[i + j] = static_cast<int>((out[i + j] + 1LL * a[i] * b[j]) % p);
    return trim(out);
}

Poly poly_mod(Poly a, const Poly& f, long p) {
    // f monic
    while (a.size() >= f.size()) {
        int lead = a.back();
        std::size_t shift = a.size() - f.size();
        for (std::size_t i = 0; i < f.size(); ++i) {
            long v = a[shift + i] - 1LL * lead * f[i] % p;
            a[shift + i] = static_cast<int>(((v % p) + p) % p);
        }
        a = trim(std::move(a));
    }
    return a;
}

Poly poly_powmod(Poly base, Int e, const Poly& f, long p) {
    Poly result = {1};
    base = poly_mod(std::move(base), f, p);
    while (e > 0) {
        if (e % 2 == 1) result = poly_mod(poly_mul(result, base, p), f, p);
        base = poly_mod(poly_mul(base, base, p), f, p);
        e /= 2;
    }
    return result;
}

Poly poly_gcd(Poly a, Poly b, long p) {
    // inputs need not be monic; normalize via modular inverse of the lead
    auto inv_mod = [p](long x) {
        long r = 1, e = p - 2, base = ((x % p) + p) % p;
        while (e > 0) {
            if (e & 1) r = r * base % p;
            base = base * base % p;
            e >>= 1;
        }
        return r;
    };
    while (!b.empty()) {
        long c = inv_mod(b.back());
        Poly bm = b;
        for (auto& x : bm) x = static_cast<int>(1LL * x * c % p);
        a = poly_mod(std::move(a), bm, p);
        std::swap(a, b);
    }
    return a;
}

bool is_irreducible(const Poly& f, long p, int k) {
    if (k == 1) return true;
    // x^{p^k} == x mod f, and gcd(x^{p^{k/r}} - x, f) = 1 for prime r | k
    Poly x = {0, 1};
    Int pk = 1;
    for (int i = 0; i < k; ++i) pk *= p;
    Poly xq = poly_powmod(x, pk, f, p);
    if (trim(xq) != trim(x)) return false;
    int kk = k;
    for (int r = 2; r <= kk; ++r) {
        if (kk % r != 0) continue;
        while (kk % r == 0) kk /= r;
        Int pe = 1;
        for (int i = 0; i < k / r; ++i) pe *= p;
        Poly xr = poly_powmod(x, pe, f, p);
        // xr - x
        Poly d = xr;
        if (d.size() < 2) d.resize(2, 0);
        d[1] = static_cast<int>(((d[1] - 1) % p + p) % p);
        d = trim(std::move(d));
        Poly g = poly_gcd(f, d, p);
        if (trim(g).size() > 1) return false;
    }
    return true;
}

}  // namespace

GFq::GFq(long q) : q_(q) {
    if (q < 2) throw DimensionMismatch("field size must be at least 2");
    if (q > (1L << 16)) throw TooLarge("field size above 2^16 is not supported");
    long p = 2;
    while (q % p != 0) {
        ++p;
        if (p * p > q) {
            p = q;
            break;
        }
    }
    p_ = p;
    long t = q;
    k_ = 0;
    while (t % p == 0) {
        t /= p;
        ++k_;
    }
    if (t != 1) throw DimensionMismatch("field size must be a prime power");

    // Deterministic modulus: first monic irreducible of degree k.
    mod_.assign(k_ + 1, 0);
    mod_[k_] = 1;
    if (k_ == 1) {
        // modulus x; arithmetic is plain mod-p
    } else {
        bool found = false;
        for (long c = 0; c < q_ && !found; ++c) {
            Poly f(k_ + 1, 0);
            long v = c;
            for (int i = 0; i < k_; ++i) {
                f[i] = static_cast<int>(v % p_);
                v /= p_;
            }
            f[k_] = 1;
            if (is_irreducible(f, p_, k_)) {
                mod_.assign(f.begin(), f.end());
                found = true;
            }
        }
        if (!found) throw InternalError("no irreducible modulus found");
    }

    // Multiplicative generator: smallest index of full order, using the
    // prime factorization of q-1.
    std::vector<long> primes;
    long m = q_ - 1;
    for (long d = 2; d * d <= m; ++d)
        if (m % d == 0) {
            primes.push_back(d);
            while (m % d == 0) m /= d;
        }
    if (m > 1) primes.push_back(m);
    gen_ = 0;
    for (int a = 1; a < q_; ++a) {
        bool ok = true;
        for (long r : primes)
            if (pow(a, Int((q_ - 1) / r)) == 1) {
                ok = false;
                break;
            }
        if (ok) {
            gen_ = a;
            break;
        }
    }
    if (gen_ == 0 && q_ > 2) throw InternalError("no multiplicative generator found");
    if (q_ == 2) gen_ = 1;

    dlog_.assign(q_, -1);
    int cur = 1;
    for (long e = 0; e < q_ - 1; ++e) {
        dlog_[cur] = e;
        cur = mul(cur, gen_);
    }
    inv_.assign(q_, 0);
    for (int a = 1; a < q_; ++a)
        inv_[a] = pow(a, Int(q_ - 2));

    if (q_ <= 512) {
        std::vector<int> add_t(q_ * q_), mul_t(q_ * q_), neg_t(q_);
        for (int a = 0; a < q_; ++a) {
            neg_t[a] = neg(a);
            for (int b = 0; b < q_; ++b) {
                add_t[a * q_ + b] = add(a, b);
                mul_t[a * q_ + b] = mul(a, b);
            }
        }
        add_tab_ = std::move(add_t);
        mul_tab_ = std::move(mul_t);
        neg_tab_ = std::move(neg_t);
    }
}

std::vector<int> GFq::digits(int a) const {
    std::vector<int> d(k_, 0);
    for (int i = 0; i < k_; ++i) {
        d[i] = static_cast<int>(a % p_);
        a = static_cast<int>(a / p_);
    }
    return d;
}

int GFq::index_of(const std::vector<int>& d) const {
    long idx = 0, mult = 1;
    for (int i = 0; i < k_; ++i) {
        idx += (i < static_cast<int>(d.size()) ? d[i] : 0) * mult;
        mult *= p_;
    }
    return static_cast<int>(idx);
}

int GFq::add(int a, int b) const {
    if (!add_tab_.empty()) return add_tab_[a * q_ + b];
    auto da = digits(a), db = digits(b);
    for (int i = 0; i < k_; ++i) da[i] = static_cast<int>((da[i] + db[i]) % p_);
    return index_of(da);
}

int GFq::neg(int a) const {
    if (!neg_tab_.empty()) return neg_tab_[a];
    auto d = digits(a);
    for (auto& x : d) x = static_cast<int>((p_ - x) % p_);
    return index_of(d);
}

int GFq::sub(int a, int b) const { return add(a, neg(b)); }

int GFq::mul(int a, int b) const {
    if (!mul_tab_.empty()) return mul_tab_[a * q_ + b];
    std::vector<int> da = digits(a), db = digits(b);
    Poly prod = poly_mod(poly_mul(trim(da), trim(db), p_), Poly(mod_.begin(), mod_.end()), p_);
    std::vector<int> d(prod.begin(), prod.end());
    return index_of(d);
}

int GFq::inv(int a) const {
    if (a == 0) throw ZeroInput("inverse of zero in " + describe());
    if (!inv_.empty()) return inv_[a];
    return pow(a, Int(q_ - 2));
}

int GFq::pow(int a, const Int& e) const {
    if (a == 0) {
        if (e < 0) throw ZeroInput("negative power of zero");
        return e == 0 ? 1 : 0;
    }
    Int m = e % (q_ - 1);
    if (m < 0) m += q_ - 1;
    int result = 1, base = a;
    Int ee = m;
    while (ee > 0) {
        if (ee % 2 == 1) result = mul(result, base);
        base = mul(base, base);
        ee /= 2;
    }
    return result;
}

int GFq::from_int(const Int& c) const {
    Int m = c % p_;
    if (m < 0) m += p_;
    return static_cast<int>(m.convert_to<long>());
}

long GFq::dlog(int a) const {
    if (a == 0) throw ZeroInput("discrete log of zero in " + describe());
    return dlog_[a];
}

std::string GFq::describe() const {
    std::ostringstream out;
    out << "F_" << q_;
    return out.str();
}

std::string GFq::element_name(int a) const {
    if (k_ == 1) return std::to_string(a);
    auto d = digits(a);
    std::string s;
    bool first = true;
    for (int i = k_ - 1; i >= 0; --i) {
        if (d[i] == 0) continue;
        if (!first) s += "+";
        first = false;
        if (i == 0 || d[i] != 1) s += std::to_string(d[i]);
        if (i >= 1) {
            if (d[i] != 1) s += "*";
            s += "x";
            if (i > 1) s += "^" + std::to_string(i);
        }
    }
    return s.empty() ? "0" : s;
}

}  // namespace bdcover
