#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace ellq
{

using prime_power = std::pair<mpz_class, unsigned>;

std::vector<std::uint64_t> primes_up_to(std::uint64_t limit);

// Smallest prime factor table for 0..limit (spf[0] = spf[1] = 0).
std::vector<std::uint32_t> smallest_prime_factors(std::uint64_t limit);

bool is_prime(std::uint64_t n);
bool is_probable_prime(mpz_class const &n);

// Factorization of |n| (n != 0), primes ascending. Trial division followed
// by Pollard-Brent rho on the cofactor.
std::vector<prime_power> factor(mpz_class const &n);

// Largest s > 0 with s^2 | n, for n != 0.
mpz_class square_part_root(mpz_class const &n);

std::vector<mpz_class> positive_divisors(std::vector<prime_power> const &fac);

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m)
{
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m);
std::uint64_t invmod(std::uint64_t a, std::uint64_t p);

// Legendre symbol (a/p), p an odd prime.
int legendre(std::uint64_t a, std::uint64_t p);

// Some square root of a modulo an odd prime p, if a is a square.
std::optional<std::uint64_t> sqrt_mod(std::uint64_t a, std::uint64_t p);

std::uint64_t reduce_mod(mpz_class const &a, std::uint64_t p);

// Kronecker symbol (d/n) for n >= 1.
int kronecker(long long d, long long n);

bool is_fundamental_discriminant(long long d);

// Best rational approximation p/q of x with 1 <= q <= max_den, via continued
// fraction convergents and semiconvergents.
mpq_class best_rational(long double x, mpz_class const &max_den);

mpz_class isqrt(mpz_class const &n);
bool is_square(mpz_class const &n, mpz_class *root = nullptr);

long double log_abs(mpz_class const &n);

long double to_long_double(mpz_class const &n);
long double to_long_double(mpq_class const &q);

} // namespace ellq
