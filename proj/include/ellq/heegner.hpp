#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ellq/curve.hpp"
#include "ellq/periods.hpp"

namespace ellq
{

struct QuadraticForm
{
    long long a = 0, b = 0, c = 0;

    long long discriminant() const { return b * b - 4 * a * c; }
    bool operator==(QuadraticForm const &o) const = default;
    std::string to_string() const;
};

QuadraticForm reduce(QuadraticForm f);

// Reduced primitive positive definite forms of discriminant D < 0, so the
// count is the class number.
std::vector<QuadraticForm> reduced_forms(long long D);

int class_number(long long D);

// Half the number of units of the order of discriminant D.
int half_unit_count(long long D);

// Smallest r >= 0 with r^2 = D (mod 4N), if any.
std::optional<long long> heegner_residue(long long N, long long D);

struct HeegnerSystem
{
    long long N = 0, D = 0, r = 0;
    std::vector<QuadraticForm> forms; // one per class, N | a, b = r (mod 2N)
    std::vector<cplx> points;          // (-b + i sqrt|D|) / 2a
    int u = 1;

    int class_number() const { return static_cast<int>(forms.size()); }
};

HeegnerSystem theta_orbit_reps(long long N, long long D, long long r);

struct ModularValue
{
    cplx w;          // sum_{n <= terms} (a_n / n) q^n
    double tail = 0; // bound on the omitted terms
};

// an must hold at least terms + 1 entries.
ModularValue modular_sum(std::vector<long long> const &an, cplx z, std::size_t terms);
ComplexPoint modular_param(Curve const &curve, PeriodLattice const &lattice, std::vector<long long> const &an, cplx z,
                           std::size_t terms, double tolerance = 1e-12);

// Rational point with x within tolerance of the complex point, x of
// denominator at most max_den, y solved exactly on the curve.
std::optional<Point> snap_point(Curve const &curve, ComplexPoint const &p, long max_den = 1000000,
                                double tolerance = 1e-7);

struct HeegnerResult
{
    HeegnerSystem system;
    cplx w;
    ComplexPoint point;
    std::optional<Point> snapped;
    double height = 0; // only meaningful when snapped
    bool torsion = false;
};

HeegnerResult heegner_point(Curve const &curve, long long N, long long D, long long r, std::size_t terms = 0);

// Quadratic twist Dy^2 = f(x) as an integral model; D = 1 is the identity.
Curve twist(Curve const &curve, long long D);

struct GrossZagierSide
{
    long long D = 0, r = 0;
    int u = 1;
    double twisted_L1 = 0;
    double height = 0;
    std::optional<Point> point;
};

struct GrossZagierReport
{
    GrossZagierSide first, second;
    double lhs = 0, rhs = 0;
    double discrepancy = 0;
    // |<P1,P2>^2 / (h(P1) h(P2)) - 1|; zero for collinear points
    double collinearity = 0;
    bool vacuous = false;
    std::string note;
};

struct GrossZagierOptions
{
    std::size_t terms = 0;
    // scales every canonical height; the discrepancy must not depend on it
    double height_scale = 1.0;
};

GrossZagierReport gross_zagier_ratio_test(Curve const &curve, long long N, int epsilon, long long D1, long long r1,
                                          long long D2, long long r2, GrossZagierOptions const &opts = {});

} // namespace ellq
