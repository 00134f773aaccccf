#pragma once

#include <vector>

#include "ellq/curve.hpp"

namespace ellq
{

struct HeightOptions
{
    // stop once successive estimates h(2^k P) / 4^k agree to this, but
    // never before min_doublings: small points can repeat a height exactly
    double tolerance = 1e-10;
    int min_doublings = 10;
    int max_doublings = 20;
};

/*
 * Canonical height as the doubling limit lim h(2^k P) / 4^k with
 * h(P) = log max(|num x|, |den x|). Coprime numerator and denominator of
 * x(2^k P) are never formed in full: their common factor at each step
 * divides the resultant R of the x-doubling polynomials, so it is found
 * exactly from residues modulo a power of R, while log|num| and log|den|
 * are propagated in floating point.
 */
double canonical_height(Curve const &curve, Point const &p, HeightOptions const &opts = {});

// h([2^k] P) / 4^k for k = 0..k_max by exact rational doubling through the
// group law. Used as the reference for the fast path.
std::vector<double> doubling_estimates_exact(Curve const &curve, Point const &p, int k_max);

// Same estimates from the fast path.
std::vector<double> doubling_estimates(Curve const &curve, Point const &p, int k_max);

// Resultant of the homogeneous x-doubling numerator and denominator.
mpz_class doubling_resultant(Curve const &curve);

double height_pairing(Curve const &curve, Point const &p, Point const &q, HeightOptions const &opts = {});

struct HeightPairing
{
    std::vector<std::vector<double>> matrix;
    double regulator = 1.0;
};

HeightPairing height_pairing_matrix(Curve const &curve, std::vector<Point> const &gens,
                                    HeightOptions const &opts = {});

// Determinant of the pairing matrix; 1 for an empty list.
double regulator(Curve const &curve, std::vector<Point> const &gens, HeightOptions const &opts = {});

} // namespace ellq
