#include <catch2/catch_amalgamated.hpp>

#include "qf/field.hpp"

using namespace qf;

TEST_CASE("prime field construction guards") {
    CHECK_THROWS_AS(PrimeField(4), field_error);
    CHECK_THROWS_AS(PrimeField(1), field_error);
    CHECK_THROWS_AS(PrimeField(67), field_error);
    CHECK_NOTHROW(PrimeField(2));
    CHECK_NOTHROW(PrimeField(61));
}

TEST_CASE("residue arithmetic") {
    PrimeField f(7);
    CHECK(f.add(5, 4) == 2);
    CHECK(f.sub(2, 5) == 4);
    CHECK(f.mul(3, 5) == 1);
    CHECK(f.neg(0) == 0);
    for (int x = 1; x < 7; ++x) CHECK(f.mul(x, f.inv(x)) == 1);
    CHECK_THROWS_AS(f.inv(0), field_error);
}

TEST_CASE("is_square basics") {
    PrimeField f5(5);
    CHECK(f5.is_square(4));
    CHECK_FALSE(f5.is_square(2));
    CHECK_THROWS_AS(f5.is_square(0), field_error);
    // p = 2: every nonzero residue counts as square
    CHECK(PrimeField(2).is_square(1));
}

TEST_CASE("is_square agrees with a direct square table for all odd p <= 61") {
    for (int p = 3; p <= 61; ++p) {
        if (!is_prime(p)) continue;
        PrimeField f(p);
        std::vector<bool> sq(p, false);
        for (int x = 1; x < p; ++x) sq[x * x % p] = true;
        int count = 0;
        for (int x = 1; x < p; ++x) {
            CHECK(f.is_square(x) == sq[x]);
            if (f.is_square(x)) ++count;
        }
        CHECK(count == (p - 1) / 2);
    }
}

TEST_CASE("GF(9) arithmetic") {
    ExtField f = gf9();
    CHECK(f.order() == 9);
    auto i = f.from_int(3);  // the generator x, with x^2 = -1
    CHECK(f.mul(i, i) == f.from_int(2));  // -1 = 2 in GF(3)
    for (long long n = 1; n < 9; ++n) {
        auto a = f.from_int(n);
        CHECK(f.mul(a, f.inv(a)) == f.one());
        CHECK(f.pow(a, 8) == f.one());
    }
    // norm is multiplicative onto GF(3)*
    for (long long n = 1; n < 9; ++n)
        for (long long m = 1; m < 9; ++m)
            CHECK(f.norm(f.mul(f.from_int(n), f.from_int(m))) ==
                  (f.norm(f.from_int(n)) * f.norm(f.from_int(m))) % 3);
}

TEST_CASE("reducible modulus is rejected") {
    // x^2 - 1 = (x-1)(x+1) over GF(3)
    CHECK_THROWS_AS(ExtField(3, 2, {2, 0, 1}), field_error);
    CHECK_NOTHROW(gf4());
}
