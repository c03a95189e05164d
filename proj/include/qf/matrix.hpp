#ifndef QF_MATRIX_HPP
#define QF_MATRIX_HPP

#include <array>
#include <compare>
#include <cstdint>
#include <cstring>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qf/field.hpp"

namespace qf {

class matrix_error : public std::runtime_error {
public:
    explicit matrix_error(const std::string& msg) : std::runtime_error(msg) {}
};

class singular_matrix_error : public matrix_error {
public:
    singular_matrix_error() : matrix_error("matrix is singular") {}
};

constexpr int kMaxDim = 8;

/// Dense d x d matrix over GF(p), d <= 6, p <= 61. Entries are canonical
/// residues stored row-major. Value type; ordering is lex on (d, p, entries),
/// which is the tie-breaking key used everywhere a representative is chosen.
struct Matrix {
    uint8_t d = 0;
    uint8_t p = 0;
    std::array<uint8_t, kMaxDim * kMaxDim> a{};

    Matrix() = default;
    Matrix(int d_, int p_) : d(static_cast<uint8_t>(d_)), p(static_cast<uint8_t>(p_)) {
        if (d_ < 1 || d_ > kMaxDim) throw matrix_error("dimension out of range");
    }

    int at(int i, int j) const { return a[i * d + j]; }
    void set(int i, int j, int v) { a[i * d + j] = static_cast<uint8_t>(((v % p) + p) % p); }

    int size() const { return d * d; }

    friend bool operator==(const Matrix& x, const Matrix& y) {
        return x.d == y.d && x.p == y.p &&
               std::memcmp(x.a.data(), y.a.data(), x.size()) == 0;
    }
    friend bool operator!=(const Matrix& x, const Matrix& y) { return !(x == y); }
    friend bool operator<(const Matrix& x, const Matrix& y) {
        if (x.d != y.d) return x.d < y.d;
        if (x.p != y.p) return x.p < y.p;
        return std::memcmp(x.a.data(), y.a.data(), x.size()) < 0;
    }
};

struct MatrixHash {
    size_t operator()(const Matrix& m) const {
        // FNV-1a over the key bytes
        size_t h = 1469598103934665603ull;
        auto mix = [&h](uint8_t b) {
            h ^= b;
            h *= 1099511628211ull;
        };
        mix(m.d);
        mix(m.p);
        for (int i = 0; i < m.size(); ++i) mix(m.a[i]);
        return h;
    }
};

inline Matrix identity(int d, int p) {
    Matrix m(d, p);
    for (int i = 0; i < d; ++i) m.set(i, i, 1);
    return m;
}

inline Matrix scalar_matrix(int d, int p, int c) {
    Matrix m(d, p);
    for (int i = 0; i < d; ++i) m.set(i, i, c);
    return m;
}

inline void check_compatible(const Matrix& x, const Matrix& y) {
    if (x.d != y.d) throw matrix_error("dimension mismatch");
    if (x.p != y.p) throw matrix_error("modulus mismatch");
}

inline Matrix mat_mul(const Matrix& x, const Matrix& y) {
    check_compatible(x, y);
    const int d = x.d, p = x.p;
    Matrix r(d, p);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            int s = 0;
            for (int k = 0; k < d; ++k) s += x.a[i * d + k] * y.a[k * d + j];
            r.a[i * d + j] = static_cast<uint8_t>(s % p);
        }
    return r;
}

inline Matrix mat_add(const Matrix& x, const Matrix& y) {
    check_compatible(x, y);
    Matrix r(x.d, x.p);
    for (int i = 0; i < x.size(); ++i) r.a[i] = static_cast<uint8_t>((x.a[i] + y.a[i]) % x.p);
    return r;
}

inline Matrix mat_sub(const Matrix& x, const Matrix& y) {
    check_compatible(x, y);
    Matrix r(x.d, x.p);
    for (int i = 0; i < x.size(); ++i)
        r.a[i] = static_cast<uint8_t>((x.a[i] - y.a[i] + x.p) % x.p);
    return r;
}

inline Matrix mat_transpose(const Matrix& x) {
    Matrix r(x.d, x.p);
    for (int i = 0; i < x.d; ++i)
        for (int j = 0; j < x.d; ++j) r.set(j, i, x.at(i, j));
    return r;
}

/// Determinant by elimination with exact modular pivoting.
inline int mat_det(const Matrix& m) {
    const int d = m.d, p = m.p;
    PrimeField f(p);
    int w[kMaxDim][kMaxDim];
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) w[i][j] = m.at(i, j);
    int det = 1;
    for (int c = 0; c < d; ++c) {
        int piv = -1;
        for (int r = c; r < d; ++r)
            if (w[r][c] != 0) {
                piv = r;
                break;
            }
        if (piv < 0) return 0;
        if (piv != c) {
            for (int j = 0; j < d; ++j) std::swap(w[piv][j], w[c][j]);
            det = f.neg(det);
        }
        det = f.mul(det, w[c][c]);
        int pinv = f.inv(w[c][c]);
        for (int r = c + 1; r < d; ++r) {
            if (w[r][c] == 0) continue;
            int factor = f.mul(w[r][c], pinv);
            for (int j = c; j < d; ++j) w[r][j] = f.sub(w[r][j], f.mul(factor, w[c][j]));
        }
    }
    return det;
}

/// Gauss-Jordan inverse; throws singular_matrix_error when det = 0.
inline Matrix mat_inv(const Matrix& m) {
    const int d = m.d, p = m.p;
    PrimeField f(p);
    int w[kMaxDim][2 * kMaxDim];
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) w[i][j] = m.at(i, j);
        for (int j = 0; j < d; ++j) w[i][d + j] = (i == j) ? 1 : 0;
    }
    for (int c = 0; c < d; ++c) {
        int piv = -1;
        for (int r = c; r < d; ++r)
            if (w[r][c] != 0) {
                piv = r;
                break;
            }
        if (piv < 0) throw singular_matrix_error();
        if (piv != c)
            for (int j = 0; j < 2 * d; ++j) std::swap(w[piv][j], w[c][j]);
        int pinv = f.inv(w[c][c]);
        for (int j = 0; j < 2 * d; ++j) w[c][j] = f.mul(w[c][j], pinv);
        for (int r = 0; r < d; ++r) {
            if (r == c || w[r][c] == 0) continue;
            int factor = w[r][c];
            for (int j = 0; j < 2 * d; ++j) w[r][j] = f.sub(w[r][j], f.mul(factor, w[c][j]));
        }
    }
    Matrix r(d, p);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) r.set(i, j, w[i][d + j]);
    return r;
}

inline bool mat_invertible(const Matrix& m) { return mat_det(m) != 0; }

inline Matrix mat_pow(Matrix m, long long n) {
    Matrix r = identity(m.d, m.p);
    while (n > 0) {
        if (n & 1) r = mat_mul(r, m);
        m = mat_mul(m, m);
        n >>= 1;
    }
    return r;
}

/// Multiplicative order; aborts past the budget.
inline int mat_order(const Matrix& m, int budget = 1 << 20) {
    Matrix id = identity(m.d, m.p);
    Matrix x = m;
    for (int n = 1; n <= budget; ++n) {
        if (x == id) return n;
        x = mat_mul(x, m);
    }
    throw matrix_error("mat_order: budget exceeded");
}

// ---------------------------------------------------------------------------
// Vector indexing. Nonzero vectors of GF(p)^d are named by integers in
// [0, p^d - 1): base-p positional encoding with the last coordinate fastest,
// shifted down by one to skip the zero vector.
// ---------------------------------------------------------------------------

inline long long num_points(int d, int p) {
    long long n = 1;
    for (int i = 0; i < d; ++i) n *= p;
    return n - 1;
}

inline long long index_of_vector(const std::array<int, kMaxDim>& v, int d, int p) {
    long long n = 0;
    for (int i = 0; i < d; ++i) n = n * p + v[i];
    if (n == 0) throw matrix_error("index_of_vector: zero vector has no index");
    return n - 1;
}

inline std::array<int, kMaxDim> vector_of_index(long long idx, int d, int p) {
    long long n = idx + 1;
    std::array<int, kMaxDim> v{};
    for (int i = d - 1; i >= 0; --i) {
        v[i] = static_cast<int>(n % p);
        n /= p;
    }
    return v;
}

/// Image of the nonzero vector named idx under the row-vector action v -> v*m.
inline long long act(long long idx, const Matrix& m) {
    const int d = m.d, p = m.p;
    auto v = vector_of_index(idx, d, p);
    std::array<int, kMaxDim> w{};
    for (int j = 0; j < d; ++j) {
        int s = 0;
        for (int i = 0; i < d; ++i) s += v[i] * m.at(i, j);
        w[j] = s % p;
    }
    return index_of_vector(w, d, p);
}

/// m has no nonzero fixed vector iff m - 1 is invertible.
inline bool is_fixed_point_free(const Matrix& m) {
    return mat_det(mat_sub(m, identity(m.d, m.p))) != 0;
}

// ---------------------------------------------------------------------------
// Kronecker product and extension-field blowup.
// ---------------------------------------------------------------------------

inline Matrix kron(const Matrix& x, const Matrix& y) {
    if (x.p != y.p) throw matrix_error("modulus mismatch");
    const int dx = x.d, dy = y.d, d = dx * dy;
    if (d > kMaxDim) throw matrix_error("kron: result dimension out of range");
    Matrix r(d, x.p);
    for (int i = 0; i < dx; ++i)
        for (int j = 0; j < dx; ++j)
            for (int k = 0; k < dy; ++k)
                for (int l = 0; l < dy; ++l)
                    r.set(i * dy + k, j * dy + l, x.at(i, j) * y.at(k, l));
    return r;
}

/// Small matrix over an extension field, used only as a staging type for
/// catalog constructions before blowing up to GF(p).
struct ExtMatrix {
    int k = 0;  // dimension
    std::vector<ExtField::Elt> a;  // row-major, k*k entries

    ExtMatrix() = default;
    ExtMatrix(int k_, const ExtField& f) : k(k_), a(k_ * k_, f.zero()) {}

    ExtField::Elt& at(int i, int j) { return a[i * k + j]; }
    const ExtField::Elt& at(int i, int j) const { return a[i * k + j]; }

    friend bool operator==(const ExtMatrix& x, const ExtMatrix& y) {
        return x.k == y.k && x.a == y.a;
    }
};

inline ExtMatrix ext_identity(int k, const ExtField& f) {
    ExtMatrix m(k, f);
    for (int i = 0; i < k; ++i) m.at(i, i) = f.one();
    return m;
}

inline ExtMatrix ext_mul(const ExtMatrix& x, const ExtMatrix& y, const ExtField& f) {
    ExtMatrix r(x.k, f);
    for (int i = 0; i < x.k; ++i)
        for (int j = 0; j < x.k; ++j) {
            ExtField::Elt s = f.zero();
            for (int l = 0; l < x.k; ++l) s = f.add(s, f.mul(x.at(i, l), y.at(l, j)));
            r.at(i, j) = s;
        }
    return r;
}

inline ExtField::Elt ext_det2(const ExtMatrix& m, const ExtField& f) {
    if (m.k != 2) throw matrix_error("ext_det2: only 2x2 supported");
    return f.sub(f.mul(m.at(0, 0), m.at(1, 1)), f.mul(m.at(0, 1), m.at(1, 0)));
}

/// The e x e multiplication matrix of z in the polynomial basis 1, x, ..,
/// x^(e-1), row-vector convention: coords(w) * rep(z) = coords(w * z).
inline Matrix regular_rep(const ExtField::Elt& z, const ExtField& f) {
    const int e = f.e, p = f.base.p;
    Matrix r(e, p);
    for (int i = 0; i < e; ++i) {
        ExtField::Elt xi = f.zero();
        xi[i] = 1;
        ExtField::Elt w = f.mul(xi, z);
        for (int j = 0; j < e; ++j) r.set(i, j, w[j]);
    }
    return r;
}

/// Replace each GF(p^e) entry by its e x e multiplication matrix; a ring
/// homomorphism from k x k matrices over GF(p^e) into GL(ke, p).
inline Matrix blowup(const ExtMatrix& m, const ExtField& f) {
    const int k = m.k, e = f.e, d = k * e;
    if (d > kMaxDim) throw matrix_error("blowup: result dimension out of range");
    Matrix r(d, f.base.p);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            Matrix blk = regular_rep(m.at(i, j), f);
            for (int u = 0; u < e; ++u)
                for (int v = 0; v < e; ++v) r.set(i * e + u, j * e + v, blk.at(u, v));
        }
    return r;
}

}  // namespace qf

#endif
