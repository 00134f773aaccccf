#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "ellq/curve.hpp"

namespace ellq
{

struct LSeriesConfig
{
    std::optional<long long> conductor;
    int epsilon = 0; // +1, -1, or 0 for automatic detection
    std::size_t cutoff = 0; // 0 selects default_cutoff(N)
};

// Terms needed for the smoothed sums at conductor N.
std::size_t default_cutoff(double conductor);

struct DirichletSum
{
    std::complex<double> value;
    double tail_bound = 0;
    std::size_t cutoff = 0;
};

// Rigorous bound on sum_{n > M} d(n) n^{1/2 - sigma}.
double dirichlet_tail_bound(double sigma, std::size_t cutoff);

DirichletSum dirichlet_partial(Curve const &curve, std::complex<double> s, std::size_t cutoff);
DirichletSum dirichlet_partial(std::vector<long long> const &an, std::complex<double> s, std::size_t cutoff);

struct CentralValue
{
    double L1 = 0;
    double L1prime = 0;
    int epsilon = 0;
    bool detected = false;   // epsilon came from the stability test
    bool inconclusive = false;
    // Relative change of the smoothed sum between two smoothing parameters
    // for each sign; the correct sign is stable.
    double drift_plus = 0, drift_minus = 0;
    std::size_t cutoff = 0;
};

CentralValue central_value(Curve const &curve, LSeriesConfig const &config);
// an[1..] must cover the cutoff.
CentralValue central_value_from_an(std::vector<long long> const &an, double conductor, int epsilon,
                                   std::size_t cutoff = 0);

// Product over bad primes of p (multiplicative) or p^2 (additive), from
// the minimal model. Unreliable at 2 and 3.
mpz_class heuristic_conductor(Curve const &curve);

struct ConductorSearch
{
    long long N = 0;
    int epsilon = 0;
    double drift = 0;
    std::size_t candidates = 0;
};

// Heuristic exponents away from 2 and 3; at 2 and 3 every admissible
// exponent is tried and the conductor whose functional equation is most
// stable wins. Empty when no candidate passes the sign test.
std::optional<ConductorSearch> conductor_search(Curve const &curve, long long max_conductor = 100000000);

struct BsdProductTrace
{
    std::vector<double> x;
    std::vector<double> product;
    std::vector<double> loglog;
    double slope = 0;
    double constant = 0;
};

// Running product of (N(p)+1)/p over p < x at geometric checkpoints up to
// xmax, with a least-squares fit of log(product) against log log x over the
// top half of the checkpoints.
BsdProductTrace bsd_product(Curve const &curve, std::uint64_t xmax, unsigned jobs = 1);

struct LeadingCoefficientReport
{
    int rank = 0;
    double regulator = 1;
    int torsion_order = 1;
    double omega = 0;
    int real_components = 1;
    std::optional<double> c0;
    std::optional<double> residual_ratio;
    CentralValue central;
};

LeadingCoefficientReport leading_coefficient_report(Curve const &curve, LSeriesConfig const &config,
                                                    std::vector<Point> const &generators);

} // namespace ellq
