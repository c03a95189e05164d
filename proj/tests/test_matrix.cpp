#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "qf/matrix.hpp"

using namespace qf;

namespace {

Matrix from_rows(int p, std::vector<std::vector<int>> rows) {
    int d = static_cast<int>(rows.size());
    Matrix m(d, p);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m.set(i, j, rows[i][j]);
    return m;
}

Matrix random_matrix(int d, int p, std::mt19937& rng) {
    Matrix m(d, p);
    for (int i = 0; i < d * d; ++i) m.a[i] = static_cast<uint8_t>(rng() % p);
    return m;
}

Matrix random_invertible(int d, int p, std::mt19937& rng) {
    for (;;) {
        Matrix m = random_matrix(d, p, rng);
        if (mat_det(m) != 0) return m;
    }
}

// Independent oracle: naive triple-loop product with wide accumulators.
Matrix naive_mul(const Matrix& x, const Matrix& y) {
    Matrix r(x.d, x.p);
    for (int i = 0; i < x.d; ++i)
        for (int j = 0; j < x.d; ++j) {
            long long s = 0;
            for (int k = 0; k < x.d; ++k)
                s += static_cast<long long>(x.at(i, k)) * y.at(k, j);
            r.set(i, j, static_cast<int>(s % x.p));
        }
    return r;
}

// Independent oracle: determinant by cofactor expansion (d <= 4).
int cofactor_det(const Matrix& m) {
    const int d = m.d, p = m.p;
    if (d == 1) return m.at(0, 0);
    int det = 0;
    for (int j = 0; j < d; ++j) {
        Matrix minor(d - 1, p);
        for (int r = 1; r < d; ++r) {
            int cc = 0;
            for (int c = 0; c < d; ++c) {
                if (c == j) continue;
                minor.set(r - 1, cc++, m.at(r, c));
            }
        }
        int term = m.at(0, j) * cofactor_det(minor) % p;
        det = (j % 2 == 0) ? (det + term) % p : (det - term % p + p) % p;
    }
    return det;
}

// Independent oracle: solve M X = I column by column by elimination on an
// explicit augmented system, organized differently from mat_inv.
Matrix gauss_solve_inverse(const Matrix& m) {
    const int d = m.d, p = m.p;
    PrimeField f(p);
    Matrix result(d, p);
    for (int col = 0; col < d; ++col) {
        std::vector<std::vector<int>> aug(d, std::vector<int>(d + 1, 0));
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) aug[i][j] = m.at(i, j);
        aug[col][d] = 1;
        for (int c = 0; c < d; ++c) {
            int piv = -1;
            for (int r = c; r < d; ++r)
                if (aug[r][c] != 0) { piv = r; break; }
            REQUIRE(piv >= 0);
            std::swap(aug[c], aug[piv]);
            int inv = f.inv(aug[c][c]);
            for (int j = 0; j <= d; ++j) aug[c][j] = f.mul(aug[c][j], inv);
            for (int r = 0; r < d; ++r) {
                if (r == c) continue;
                int fac = aug[r][c];
                for (int j = 0; j <= d; ++j) aug[r][j] = f.sub(aug[r][j], f.mul(fac, aug[c][j]));
            }
        }
        // aug now holds the solution of x M = e_col? No: M x = e_col; x fills
        // column col of M^-1.
        for (int i = 0; i < d; ++i) result.set(i, col, aug[i][d]);
    }
    return result;
}

}  // namespace

TEST_CASE("mat_mul basics") {
    std::mt19937 rng(12345);
    Matrix m = random_matrix(3, 7, rng);
    CHECK(mat_mul(identity(3, 7), m) == m);

    Matrix a = from_rows(5, {{0, 4}, {1, 0}});
    CHECK(mat_mul(a, a) == from_rows(5, {{4, 0}, {0, 4}}));

    Matrix wrongp = random_matrix(3, 5, rng);
    CHECK_THROWS_AS(mat_mul(m, wrongp), matrix_error);
}

TEST_CASE("mat_mul associativity against the naive oracle") {
    std::mt19937 rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        int d = 2 + (trial % 3);
        int p = (trial % 2) ? 7 : 31;
        Matrix m = random_matrix(d, p, rng), n = random_matrix(d, p, rng),
               q = random_matrix(d, p, rng);
        CHECK(mat_mul(m, n) == naive_mul(m, n));
        CHECK(mat_mul(mat_mul(m, n), q) == mat_mul(m, mat_mul(n, q)));
    }
}

TEST_CASE("mat_inv") {
    CHECK(mat_inv(identity(4, 3)) == identity(4, 3));
    CHECK(mat_inv(from_rows(5, {{2, 0}, {0, 1}})) == from_rows(5, {{3, 0}, {0, 1}}));
    CHECK_THROWS_AS(mat_inv(from_rows(5, {{1, 2}, {2, 4}})), singular_matrix_error);

    std::mt19937 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        int d = 2 + (trial % 3);
        Matrix m = random_invertible(d, 11, rng);
        Matrix inv = mat_inv(m);
        CHECK(mat_mul(m, inv) == identity(d, 11));
        CHECK(inv == gauss_solve_inverse(m));
        CHECK(mat_inv(inv) == m);
    }
}

TEST_CASE("mat_det") {
    CHECK(mat_det(identity(4, 5)) == 1);
    CHECK(mat_det(from_rows(7, {{1, 2, 3}, {1, 2, 3}, {0, 1, 4}})) == 0);
    std::mt19937 rng(21);
    for (int trial = 0; trial < 60; ++trial) {
        int d = 2 + (trial % 3);
        int p = (trial % 2) ? 3 : 13;
        Matrix m = random_matrix(d, p, rng), n = random_matrix(d, p, rng);
        CHECK(mat_det(m) == cofactor_det(m));
        CHECK(mat_det(mat_mul(m, n)) == mat_det(m) * mat_det(n) % p);
    }
}

TEST_CASE("vector index round trip") {
    for (auto [d, p] : std::vector<std::pair<int, int>>{{2, 5}, {4, 3}, {4, 2}}) {
        long long n = num_points(d, p);
        std::vector<bool> hit(n, false);
        for (long long idx = 0; idx < n; ++idx) {
            auto v = vector_of_index(idx, d, p);
            CHECK(index_of_vector(v, d, p) == idx);
            hit[idx] = true;
        }
        CHECK(std::all_of(hit.begin(), hit.end(), [](bool b) { return b; }));
    }
    // encoding convention: last coordinate fastest, index 0 is (0,..,0,1)
    auto v = vector_of_index(0, 4, 3);
    CHECK((v[0] == 0 && v[1] == 0 && v[2] == 0 && v[3] == 1));
}

TEST_CASE("act") {
    std::mt19937 rng(5);
    Matrix m = random_invertible(2, 5, rng);
    long long n = num_points(2, 5);
    for (long long v = 0; v < n; ++v) {
        CHECK(act(v, identity(2, 5)) == v);
        CHECK(act(act(v, m), mat_inv(m)) == v);
    }
    // exhaustive bijection check
    for (int trial = 0; trial < 10; ++trial) {
        Matrix t = random_invertible(4, 3, rng);
        long long np = num_points(4, 3);
        std::vector<bool> hit(np, false);
        for (long long v = 0; v < np; ++v) hit[act(v, t)] = true;
        CHECK(std::all_of(hit.begin(), hit.end(), [](bool b) { return b; }));
    }
}

TEST_CASE("fixed point free: determinant test vs exhaustive orbits") {
    std::mt19937 rng(31);
    for (int trial = 0; trial < 40; ++trial) {
        Matrix m = random_invertible(2, 11, rng);
        bool direct = true;
        for (long long v = 0; v < num_points(2, 11); ++v)
            if (act(v, m) == v) { direct = false; break; }
        CHECK(is_fixed_point_free(m) == direct);
    }
    CHECK_FALSE(is_fixed_point_free(identity(2, 5)));
    CHECK(is_fixed_point_free(scalar_matrix(2, 5, 4)));  // -1 over odd p
}

TEST_CASE("kron") {
    CHECK(kron(identity(2, 3), identity(2, 3)) == identity(4, 3));

    std::mt19937 rng(77);
    Matrix a = random_matrix(2, 3, rng);
    Matrix k = kron(a, identity(2, 3));
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int u = 0; u < 2; ++u)
                for (int v = 0; v < 2; ++v)
                    CHECK(k.at(i * 2 + u, j * 2 + v) == (u == v ? a.at(i, j) : 0));

    // mixed product property, checked against directly expanded entries
    for (int trial = 0; trial < 30; ++trial) {
        Matrix x = random_matrix(2, 3, rng), y = random_matrix(2, 3, rng),
               z = random_matrix(2, 3, rng), w = random_matrix(2, 3, rng);
        CHECK(mat_mul(kron(x, y), kron(z, w)) == kron(mat_mul(x, z), mat_mul(y, w)));
    }
}

TEST_CASE("blowup") {
    ExtField f = gf9();
    CHECK(blowup(ext_identity(2, f), f) == identity(4, 3));

    std::mt19937 rng(13);
    auto random_ext = [&](int k) {
        ExtMatrix m(k, f);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) m.at(i, j) = f.from_int(rng() % 9);
        return m;
    };
    for (int trial = 0; trial < 30; ++trial) {
        ExtMatrix m = random_ext(2), n = random_ext(2);
        CHECK(blowup(ext_mul(m, n, f), f) == mat_mul(blowup(m, f), blowup(n, f)));
        // det over GF(3) of the blowup is the norm of the GF(9) determinant
        CHECK(mat_det(blowup(m, f)) == f.norm(ext_det2(m, f)));
    }
}
