#pragma once

#include <array>
#include <complex>

#include "ellq/curve.hpp"

namespace ellq
{

using real = long double;
using cplx = std::complex<long double>;

real agm(real a, real b);
cplx agm(cplx a, cplx b);

// Roots of x^3 + A x + B for the rational short form of the curve. With
// three real roots they are returned in decreasing order; otherwise the real
// root comes first and the other two are complex conjugates.
struct CubicRoots
{
    std::array<cplx, 3> e;
    bool all_real = false;
};

CubicRoots short_form_roots(Curve const &curve);

/*
 * Period lattice of the invariant differential dx / (2y + a1 x + a3).
 * w1 is the real period (positive real), Im(w2 / w1) > 0, and (r1, r2) is a
 * reduced basis of the same lattice used for the q-series of the
 * Weierstrass functions.
 */
struct PeriodLattice
{
    cplx w1, w2;
    cplx r1, r2;
    int real_components = 1;
};

PeriodLattice period_lattice(Curve const &curve);

// The integral of dx / sqrt(f(x)) from the largest real root of f to
// infinity, for y^2 = f(x) = x^3 + A x + B the short form. Equal to w1.
real real_period(Curve const &curve);

// g2 and g3 of the lattice from Eisenstein series in q = exp(2 pi i r2 / r1).
std::array<cplx, 2> lattice_invariants(PeriodLattice const &lattice);

cplx reduce_mod_lattice(cplx z, PeriodLattice const &lattice);

cplx weierstrass_p(cplx z, PeriodLattice const &lattice);
cplx weierstrass_p_prime(cplx z, PeriodLattice const &lattice);

struct ComplexPoint
{
    bool infinity = false;
    cplx x, y;
};

// The point of E(C) with elliptic logarithm z on the given model.
ComplexPoint elliptic_exp(Curve const &curve, PeriodLattice const &lattice, cplx z);

} // namespace ellq
