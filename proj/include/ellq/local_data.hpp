#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ellq/curve.hpp"

namespace ellq
{

enum class Reduction { good, additive, split, nonsplit };

std::string to_string(Reduction r);

struct LocalData
{
    std::uint64_t p = 0;
    long long ap = 0;
    Reduction kind = Reduction::good;
    // Nonsingular points of the reduced curve, including infinity.
    std::uint64_t smooth_count = 0;
};

// All of these count |E(F_p)|: affine solutions of the model mod p plus one
// for the point at infinity. Singular points are included.
std::uint64_t count_points_naive(Curve const &curve, std::uint64_t p);
std::uint64_t count_points_charsum(Curve const &curve, std::uint64_t p);
// Good primes p >= 5 only: order of E(F_p) from baby-step giant-step point
// orders on the curve and its quadratic twist.
std::uint64_t count_points_bsgs(Curve const &curve, std::uint64_t p);
std::uint64_t count_points_fp(Curve const &curve, std::uint64_t p);

// Nonsingular points of the reduced curve including infinity, counted by
// enumeration with the partial-derivative test.
std::uint64_t smooth_points_naive(Curve const &curve, std::uint64_t p);

bool is_good_prime(Curve const &curve, std::uint64_t p);

LocalData reduction_type(Curve const &curve, std::uint64_t p);

std::vector<LocalData> local_data_up_to(Curve const &curve, std::uint64_t pmax);

// a_0 = 0 (unused), a_1 = 1, ..., a_limit.
std::vector<long long> an_coefficients(Curve const &curve, std::size_t limit);

// Extend prime data to all indices. `bad` marks primes with a_{p^k} = a_p^k.
std::vector<long long> an_from_local(std::vector<LocalData> const &primes, std::size_t limit);

} // namespace ellq
