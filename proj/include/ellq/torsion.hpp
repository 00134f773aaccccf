#pragma once

#include <string>
#include <vector>

#include "ellq/curve.hpp"

namespace ellq
{

// Z/m Z x Z/n Z with m | n; m = 1 is the cyclic case.
struct TorsionStructure
{
    int m = 1;
    int n = 1;

    int order() const { return m * n; }
    bool operator==(TorsionStructure const &o) const = default;
};

std::string to_string(TorsionStructure const &s);

// One of Z/nZ (1 <= n <= 10, n = 12) or Z/2Z x Z/2nZ (1 <= n <= 4).
bool mazur_check(TorsionStructure const &s);

struct TorsionGroup
{
    TorsionStructure structure;
    std::vector<Point> generators;
    std::vector<Point> points; // every element, infinity first
    int order() const { return structure.order(); }
};

// Integral points with y = 0 or y^2 | 4A^3 + 27B^2 on y^2 = x^3 + Ax + B.
// Only short models are accepted.
std::vector<Point> lutz_nagell_candidates(Curve const &short_model);

// Integer roots of x^3 + A x + C, ascending.
std::vector<mpz_class> integer_roots_depressed_cubic(mpz_class const &A, mpz_class const &C);

// gcd of |E(F_p)| over the first few odd good primes; |E_tor| divides it.
long long torsion_order_bound(Curve const &curve, int primes = 10);

// E_tor(Q) with points expressed on the input model.
TorsionGroup torsion_subgroup(Curve const &curve);

} // namespace ellq
