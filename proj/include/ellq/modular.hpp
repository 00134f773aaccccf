#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "ellq/curve.hpp"
#include "ellq/l_series.hpp"
#include "ellq/sl2.hpp"
#include "ellq/torsion.hpp"

namespace ellq
{

// Truncated Laurent series sum_{i < length} coeffs[i] q^(valuation + i).
struct QSeries
{
    int valuation = 0;
    std::vector<mpq_class> coeffs;

    std::size_t length() const { return coeffs.size(); }
    // Zero below the valuation; throws past the truncation.
    mpq_class coefficient(int n) const;

    QSeries operator*(QSeries const &o) const;
    QSeries operator+(QSeries const &o) const;
    QSeries operator-(QSeries const &o) const;
    QSeries scaled(mpq_class const &s) const;
    // Requires a nonzero leading coefficient after stripping zeros.
    QSeries inverse() const;
    QSeries normalized() const;
};

// E4 = 1 + 240 sum sigma_3(n) q^n and E6 = 1 - 504 sum sigma_5(n) q^n,
// exponents 0 .. terms - 1.
QSeries eisenstein_e4(std::size_t terms);
QSeries eisenstein_e6(std::size_t terms);
// (E4^3 - E6^2) / 1728, starting at q^1, exponents 1 .. terms.
QSeries delta_series(std::size_t terms);
// E4^3 / Delta, exponents -1 .. T.
QSeries j_series(std::size_t T);

// Upper bound exp(4 pi sqrt n) / (sqrt 2 n^(3/4)) for the coefficient c(n) of j.
long double j_coefficient_bound(std::size_t n);
// Bound for sum_{n > T} c(n) |q|^n.
long double j_tail_bound(std::size_t T, long double abs_q);

using cplxl = std::complex<long double>;

struct JValue
{
    cplxl value;
    long double tail = 0;
    std::size_t terms = 0;
};

// q^-1 + 744 + sum_{n <= T} c(n) q^n at tau; throws when the tail bound
// exceeds tolerance * max(1, |value|).
JValue j_eval(cplxl tau, std::size_t T, long double tolerance = 1e-12L);

// Representative in |Re tau| <= 1/2, |tau| >= 1.
cplxl reduce_to_fundamental(cplxl tau);

// j(tau) for any tau in the upper half plane, evaluated on the reduced point.
JValue j_value(cplxl tau, std::size_t T = 60);

struct CMPoint
{
    int index = 0;
    bool half = false;     // tau = (1 + i sqrt m) / 2 when set, else i sqrt m
    int radicand = 1;      // m
    int sign = 1;
    std::vector<std::pair<int, int>> j_factors; // prime, exponent
    mpz_class j;

    cplxl tau() const;
    std::string tau_string() const;
    std::string j_string() const; // signed product of prime powers
};

std::vector<CMPoint> const &cm_points();
CMPoint const &cm_point(int index);

struct CMCheck
{
    CMPoint point;
    cplxl computed;
    double error = 0; // relative, or absolute for j = 0
    double tail = 0;  // truncation bound on the same scale as error
    bool absolute = false;
    bool pass = false;
};

struct CMTableReport
{
    std::size_t terms = 0;
    double relative_tolerance = 0, absolute_tolerance = 0;
    std::vector<CMCheck> rows;
    bool pass = false;
};

CMTableReport cm_table_verify(std::size_t terms = 40, double relative_tolerance = 1e-6,
                              double absolute_tolerance = 1e-4);

std::vector<cplxd> k_orbit_sample(int index, std::vector<double> const &angles);

// The three cone sets through a nilpotent preimage of alpha_index (index != 2).
std::array<ConeSet, 3> cone_sets(int index);

// Integral short model with j-invariant exactly j, free of p^4 | A, p^6 | B
// at the primes of j's numerator, denominator and 1728 - j.
Curve curve_from_j(mpq_class const &j);

// Quadratic twist y^2 = x^3 + A/d^2 x + B/d^3 over integral d with the
// smallest minimal discriminant, then the smallest heuristic conductor.
Curve minimal_twist(Curve const &short_model);

// The nearest integer, else the continued-fraction convergent p/q of least
// q <= max_den, with |x - p/q| <= residual * max(1, |x|).
std::optional<mpq_class> snap_rational(long double x, long max_den, double residual);

enum class HarnessSet { orbit, X, Y, Z };

std::string to_string(HarnessSet s);

enum class Verdict { consistent, inconsistent, inconclusive };

std::string to_string(Verdict v);

struct ConductorInfo
{
    long long N = 0;
    std::string source; // "registry", "search" or "heuristic"
};

struct HarnessOptions
{
    std::uint64_t seed = 1;
    std::uint64_t xmax = 100000;
    long max_den = 10000;
    double residual = 1e-8;
    bool twists = false;
    unsigned jobs = 1;
    // Curves with a larger discriminant are reported without analysis.
    double max_log10_discriminant = 60;
    long long max_conductor = 10000000000LL;
    // Known conductor of a curve, e.g. from the registry.
    std::function<std::optional<long long>(Curve const &)> conductor_lookup;
};

struct Evidence
{
    std::size_t sample = 0;
    long long twist = 1;
    Curve curve = Curve::short_weierstrass(0, 1);
    mpq_class j;
    std::optional<TorsionStructure> torsion;
    std::optional<double> slope;
    std::optional<ConductorInfo> conductor;
    std::optional<CentralValue> central;
    std::optional<int> analytic_rank; // lower bound when central values vanish
    bool rank_is_lower_bound = false;
    Verdict verdict = Verdict::inconclusive;
    std::string note;
};

struct HarnessSample
{
    cplxd tau;
    cplxl j;
    std::optional<mpq_class> snapped;
    double snap_residual = 0;
};

struct HarnessReport
{
    int index = 0;
    HarnessSet set = HarnessSet::orbit;
    std::size_t budget = 0;
    std::string header;
    std::string interpretation;
    std::vector<HarnessSample> samples;
    std::vector<Evidence> evidence;
};

HarnessReport conjecture_harness(int index, HarnessSet set, std::size_t budget, HarnessOptions const &opts = {});

// Analysis of a single curve as done by the harness.
Evidence analyze_curve(Curve const &curve, HarnessOptions const &opts);

} // namespace ellq
