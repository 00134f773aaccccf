#include <doctest.h>

#include <cmath>

#include "ellq/numtheory.hpp"

using namespace ellq;

TEST_CASE("best rational approximation")
{
    CHECK(best_rational(0.5L, 10) == mpq_class(1, 2));
    CHECK(best_rational(-7.3e-19L, 1000000) == 0);
    CHECK(best_rational(3.14159265358979323846L, 1000) == mpq_class(355, 113));
    CHECK(best_rational(3.14159265358979323846L, 7) == mpq_class(22, 7));
    CHECK(best_rational(-2.25L, 100) == mpq_class(-9, 4));
    CHECK(best_rational(1728.0000000001L, 10000) == 1728);
    CHECK(best_rational(-884736000.0L, 10000) == -884736000);
    CHECK(best_rational(1.0L / 3.0L, 2) == mpq_class(1, 2));
}

TEST_CASE("primes and factoring")
{
    CHECK(primes_up_to(30).size() == 10);
    CHECK(is_prime(1000000007ULL));
    CHECK_FALSE(is_prime(1000000007ULL * 3));
    auto f = factor(mpz_class("-714877"));
    REQUIRE(f.size() == 2);
    CHECK(f[0].first == 37);
    CHECK(f[1].first == 139);
    CHECK(f[1].second == 2);
    auto g = factor(mpz_class("1000000016000000063"));
    REQUIRE(g.size() == 2);
    CHECK(g[0].first * g[1].first == mpz_class("1000000016000000063"));
    CHECK(square_part_root(mpz_class(-4 * 27 * 5)) == 6);
    CHECK(positive_divisors(factor(mpz_class(12))).size() == 6);
}

TEST_CASE("modular arithmetic")
{
    CHECK(legendre(2, 7) == 1);
    CHECK(legendre(3, 7) == -1);
    CHECK(kronecker(-7, 2) == 1);
    CHECK(kronecker(-3, 2) == -1);
    CHECK(kronecker(-4, 3) == -1);
    for (std::uint64_t p : {7ULL, 13ULL, 1000003ULL}) {
        for (std::uint64_t a = 1; a < 50; ++a) {
            if (a % p == 0)
                continue;
            auto r = sqrt_mod(a, p);
            CHECK(r.has_value() == (legendre(a, p) == 1));
            if (r)
                CHECK(mulmod(*r, *r, p) == a % p);
        }
    }
    CHECK(is_fundamental_discriminant(-7));
    CHECK(is_fundamental_discriminant(-4));
    CHECK(is_fundamental_discriminant(-8));
    CHECK_FALSE(is_fundamental_discriminant(-27));
    CHECK_FALSE(is_fundamental_discriminant(-12));
}

TEST_CASE("long double conversion")
{
    mpz_class big("123456789012345678901234567890");
    CHECK(std::fabs(to_long_double(big) / 1.23456789012345678901234567890e29L - 1) < 1e-18);
    mpq_class q(mpz_class("1000000000000000000000001"), mpz_class("3000000000000000000000000"));
    CHECK(std::fabs(to_long_double(q) - 1.0L / 3) < 1e-18);
    CHECK(to_long_double(mpz_class(-5)) == -5);
}
