#ifndef QF_FIELD_HPP
#define QF_FIELD_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qf {

class field_error : public std::runtime_error {
public:
    explicit field_error(const std::string& msg) : std::runtime_error(msg) {}
};

inline bool is_prime(int n) {
    if (n < 2) return false;
    for (int q = 2; q * q <= n; ++q)
        if (n % q == 0) return false;
    return true;
}

/// Arithmetic of GF(p), residues kept in [0, p).
struct PrimeField {
    int p;

    explicit PrimeField(int p_) : p(p_) {
        if (!is_prime(p) || p > 61)
            throw field_error("PrimeField: modulus " + std::to_string(p) +
                              " is not a prime in [2, 61]");
    }

    int add(int a, int b) const { return (a + b) % p; }
    int sub(int a, int b) const { return (a - b + p) % p; }
    int mul(int a, int b) const { return (a * b) % p; }
    int neg(int a) const { return (p - a) % p; }

    int pow(int a, long long e) const {
        long long r = 1, b = a % p;
        while (e > 0) {
            if (e & 1) r = r * b % p;
            b = b * b % p;
            e >>= 1;
        }
        return static_cast<int>(r);
    }

    int inv(int a) const {
        if (a % p == 0) throw field_error("PrimeField: inverse of zero");
        return pow(a, p - 2);
    }

    // Quadratic residue test by Euler's criterion. For p = 2 every nonzero
    // residue counts as a square; fingerprints rely on this convention.
    bool is_square(int x) const {
        x %= p;
        if (x == 0) throw field_error("is_square: x = 0 must be handled by the caller");
        if (p == 2) return true;
        return pow(x, (p - 1) / 2) == 1;
    }
};

/// GF(p^e) in a fixed polynomial basis. Elements are coefficient vectors of
/// length e, least significant coefficient first.
struct ExtField {
    PrimeField base;
    int e;
    std::vector<int> modulus;  // monic, degree e; coefficients of x^0..x^e

    using Elt = std::vector<int>;

    ExtField(int p_, int e_, std::vector<int> modulus_)
        : base(p_), e(e_), modulus(std::move(modulus_)) {
        if (e < 1) throw field_error("ExtField: extension degree must be >= 1");
        if (static_cast<int>(modulus.size()) != e + 1 || modulus[e] != 1)
            throw field_error("ExtField: modulus must be monic of degree e");
        for (int& c : modulus) c = ((c % base.p) + base.p) % base.p;
        if (!irreducible())
            throw field_error("ExtField: modulus polynomial is reducible");
    }

    long long order() const {
        long long q = 1;
        for (int i = 0; i < e; ++i) q *= base.p;
        return q;
    }

    Elt zero() const { return Elt(e, 0); }
    Elt one() const {
        Elt r(e, 0);
        r[0] = 1;
        return r;
    }
    bool is_zero(const Elt& a) const {
        for (int c : a)
            if (c != 0) return false;
        return true;
    }

    Elt from_int(long long n) const {
        Elt r(e, 0);
        for (int i = 0; i < e; ++i) {
            r[i] = static_cast<int>(n % base.p);
            n /= base.p;
        }
        return r;
    }
    long long to_int(const Elt& a) const {
        long long n = 0;
        for (int i = e - 1; i >= 0; --i) n = n * base.p + a[i];
        return n;
    }

    Elt add(const Elt& a, const Elt& b) const {
        Elt r(e);
        for (int i = 0; i < e; ++i) r[i] = base.add(a[i], b[i]);
        return r;
    }
    Elt sub(const Elt& a, const Elt& b) const {
        Elt r(e);
        for (int i = 0; i < e; ++i) r[i] = base.sub(a[i], b[i]);
        return r;
    }
    Elt neg(const Elt& a) const {
        Elt r(e);
        for (int i = 0; i < e; ++i) r[i] = base.neg(a[i]);
        return r;
    }

    Elt mul(const Elt& a, const Elt& b) const {
        std::vector<int> prod(2 * e - 1, 0);
        for (int i = 0; i < e; ++i) {
            if (a[i] == 0) continue;
            for (int j = 0; j < e; ++j)
                prod[i + j] = (prod[i + j] + a[i] * b[j]) % base.p;
        }
        // reduce modulo the defining polynomial
        for (int k = 2 * e - 2; k >= e; --k) {
            int c = prod[k];
            if (c == 0) continue;
            prod[k] = 0;
            for (int i = 0; i < e; ++i)
                prod[k - e + i] = base.sub(prod[k - e + i], base.mul(c, modulus[i]));
        }
        prod.resize(e);
        return prod;
    }

    Elt pow(Elt a, long long n) const {
        Elt r = one();
        while (n > 0) {
            if (n & 1) r = mul(r, a);
            a = mul(a, a);
            n >>= 1;
        }
        return r;
    }

    Elt inv(const Elt& a) const {
        if (is_zero(a)) throw field_error("ExtField: inverse of zero");
        return pow(a, order() - 2);
    }

    /// Frobenius norm down to GF(p): a^(1 + p + ... + p^(e-1)).
    int norm(const Elt& a) const {
        long long exp = 0, pk = 1;
        for (int i = 0; i < e; ++i) {
            exp += pk;
            pk *= base.p;
        }
        return pow(a, exp)[0];
    }

private:
    bool irreducible() const {
        if (e == 1) return true;
        if (e <= 3) {
            // degree 2 or 3 is reducible iff it has a root
            for (int x = 0; x < base.p; ++x) {
                int v = 0;
                for (int i = e; i >= 0; --i) v = (v * x + modulus[i]) % base.p;
                if (v == 0) return false;
            }
            return true;
        }
        // f is irreducible of degree e iff x^(p^e) = x mod f and
        // gcd(x^(p^(e/q)) - x, f) = 1 for every prime divisor q of e.
        auto frob = [&](int k) {
            Elt x(e, 0);
            if (e > 1) x[1] = 1;
            long long n = 1;
            for (int i = 0; i < k; ++i) n *= base.p;
            return pow(x, n);
        };
        Elt x(e, 0);
        x[1] = 1;
        if (frob(e) != x) return false;
        for (int q = 2; q <= e; ++q) {
            if (e % q != 0 || !is_prime(q)) continue;
            Elt d = sub(frob(e / q), x);
            // gcd(d(x), f) != 1 iff d, viewed mod f, is a zero divisor; since f
            // would then have a factor of degree e/q, it suffices to check that
            // d is invertible: d * d^(p^e - 2) == 1.
            if (is_zero(d)) return false;
            if (mul(d, pow(d, order() - 2)) != one()) return false;
        }
        return true;
    }
};

/// The pinned extension fields used by the catalog.
inline ExtField gf9() { return ExtField(3, 2, {1, 0, 1}); }   // x^2 + 1 over GF(3)
inline ExtField gf4() { return ExtField(2, 2, {1, 1, 1}); }   // x^2 + x + 1 over GF(2)

}  // namespace qf

#endif
