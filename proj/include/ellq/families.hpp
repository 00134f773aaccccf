#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "ellq/curve.hpp"

namespace ellq
{

// A, B integral, 4A^3 + 27B^2 != 0, and no prime with p^4 | A and p^6 | B.
bool is_family_member(mpz_class const &A, mpz_class const &B);

// All members of height max{4|A|^3, 27B^2} < X, A-major and B-minor.
struct FamilySlice
{
    std::uint64_t X = 0;
    std::vector<Curve> curves;
};

FamilySlice enumerate_family(std::uint64_t X);

using Functional = std::function<double(Curve const &)>;
using Predicate = std::function<bool(Curve const &)>;

// The functional must be pure; values are evaluated in parallel and summed
// in enumeration order.
std::vector<double> evaluate(FamilySlice const &slice, Functional const &phi, unsigned jobs = 1);
double average(FamilySlice const &slice, Functional const &phi, unsigned jobs = 1);
double prob(FamilySlice const &slice, Predicate const &pred, unsigned jobs = 1);

struct AveragePoint
{
    std::uint64_t X = 0;
    std::size_t count = 0;
    double value = 0;
};

// Finite-X averages at increasing cutoffs, reusing the largest slice.
std::vector<AveragePoint> average_sequence(std::vector<std::uint64_t> const &cutoffs, Functional const &phi,
                                           unsigned jobs = 1);

// Built-in statistics: "torsion" (order of the torsion subgroup), "ap:<p>",
// and "slope" (fitted exponent of the product of (N(p)+1)/p).
struct FamilyStat
{
    std::string name;
    Functional phi;
};

FamilyStat parse_family_stat(std::string const &spec, std::uint64_t xmax = 10000);

} // namespace ellq
