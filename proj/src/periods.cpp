#include "ellq/periods.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ellq/numtheory.hpp"

namespace ellq
{

namespace
{

constexpr real pi = std::numbers::pi_v<long double>;
constexpr real eps = 1e-19L;

real polish(real x, real A, real B)
{
    for (int i = 0; i < 6; ++i) {
        real f = (x * x + A) * x + B;
        real d = 3 * x * x + A;
        if (d == 0)
            break;
        real nx = x - f / d;
        if (nx == x)
            break;
        x = nx;
    }
    return x;
}

} // namespace

real agm(real a, real b)
{
    for (int i = 0; i < 100 && std::fabs(a - b) > eps * std::fabs(a); ++i) {
        real m = (a + b) / 2;
        b = std::sqrt(a * b);
        a = m;
    }
    return a;
}

cplx agm(cplx a, cplx b)
{
    for (int i = 0; i < 100 && std::abs(a - b) > eps * std::abs(a); ++i) {
        cplx m = (a + b) / 2.0L;
        cplx g = std::sqrt(a * b);
        if (std::abs(m - g) > std::abs(m + g))
            g = -g;
        a = m;
        b = g;
    }
    return a;
}

CubicRoots short_form_roots(Curve const &curve)
{
    mpq_class Aq = curve.short_a(), Bq = curve.short_b();
    real A = to_long_double(Aq), B = to_long_double(Bq);
    CubicRoots out;
    out.all_real = 4 * Aq * Aq * Aq + 27 * Bq * Bq < 0;
    if (out.all_real) {
        real m = 2 * std::sqrt(-A / 3);
        real arg = 3 * B / (A * m);
        arg = std::clamp(arg, -1.0L, 1.0L);
        real theta = std::acos(arg) / 3;
        std::array<real, 3> r;
        for (int k = 0; k < 3; ++k)
            r[k] = polish(m * std::cos(theta - 2 * pi * k / 3), A, B);
        std::sort(r.begin(), r.end(), std::greater<>());
        for (int k = 0; k < 3; ++k)
            out.e[k] = cplx(r[k], 0);
    } else {
        real s = std::sqrt(B * B / 4 + A * A * A / 27);
        real t = B >= 0 ? -B / 2 - s : -B / 2 + s;
        real u = std::cbrt(t);
        real e1 = u == 0 ? 0 : u - A / (3 * u);
        e1 = polish(e1, A, B);
        real im = std::sqrt(std::max(0.0L, 3 * e1 * e1 + 4 * A)) / 2;
        out.e = {cplx(e1, 0), cplx(-e1 / 2, im), cplx(-e1 / 2, -im)};
    }
    return out;
}

PeriodLattice period_lattice(Curve const &curve)
{
    CubicRoots r = short_form_roots(curve);
    PeriodLattice L;
    if (r.all_real) {
        real e1 = r.e[0].real(), e2 = r.e[1].real(), e3 = r.e[2].real();
        L.w1 = cplx(pi / agm(std::sqrt(e1 - e3), std::sqrt(e1 - e2)), 0);
        L.w2 = cplx(0, pi / agm(std::sqrt(e1 - e3), std::sqrt(e2 - e3)));
        L.real_components = 2;
    } else {
        cplx w = std::sqrt(r.e[0] - r.e[1]);
        real a = std::fabs(w.real()), b = std::abs(w), c = std::fabs(w.imag());
        L.w1 = cplx(pi / agm(a, b), 0);
        L.w2 = -L.w1 / 2.0L + cplx(0, pi / (2 * agm(b, c)));
        L.real_components = 1;
    }

    cplx r1 = L.w1, r2 = L.w2;
    for (int it = 0; it < 64; ++it) {
        cplx tau = r2 / r1;
        real n = std::round(tau.real());
        r2 -= n * r1;
        tau = r2 / r1;
        if (std::abs(tau) >= 1 - 1e-15L)
            break;
        cplx t = r1;
        r1 = r2;
        r2 = -t;
    }
    L.r1 = r1;
    L.r2 = r2;
    return L;
}

real real_period(Curve const &curve) { return period_lattice(curve).w1.real(); }

std::array<cplx, 2> lattice_invariants(PeriodLattice const &L)
{
    cplx tau = L.r2 / L.r1;
    cplx q = std::exp(cplx(0, 2 * pi) * tau);
    cplx e4 = 1, e6 = 1, qn = 1;
    for (int n = 1; n < 400; ++n) {
        qn *= q;
        if (std::abs(qn) * std::pow(static_cast<real>(n), 6) < 1e-24L)
            break;
        real s3 = 0, s5 = 0;
        for (int d = 1; d <= n; ++d) {
            if (n % d == 0) {
                real dd = d;
                s3 += dd * dd * dd;
                s5 += dd * dd * dd * dd * dd;
            }
        }
        e4 += 240.0L * s3 * qn;
        e6 -= 504.0L * s5 * qn;
    }
    cplx k = cplx(2 * pi, 0) / L.r1;
    cplx k2 = k * k;
    return {k2 * k2 * e4 / 12.0L, k2 * k2 * k2 * e6 / 216.0L};
}

cplx reduce_mod_lattice(cplx z, PeriodLattice const &L)
{
    // z = s r1 + t r2 with real s, t
    real det = L.r1.real() * L.r2.imag() - L.r1.imag() * L.r2.real();
    real s = (z.real() * L.r2.imag() - z.imag() * L.r2.real()) / det;
    real t = (L.r1.real() * z.imag() - L.r1.imag() * z.real()) / det;
    s -= std::round(s);
    t -= std::round(t);
    return s * L.r1 + t * L.r2;
}

namespace
{

struct PSeries
{
    cplx p, dp;
};

PSeries p_series(cplx z, PeriodLattice const &L)
{
    z = reduce_mod_lattice(z, L);
    cplx k = cplx(0, 2 * pi) / L.r1;
    cplx q = std::exp(k * L.r2);
    cplx u = std::exp(k * z), ui = 1.0L / u;
    real aq = std::abs(q);
    real bound = std::max(std::abs(u), std::abs(ui));

    auto term = [](cplx v) { return v / ((1.0L - v) * (1.0L - v)); };
    auto dterm = [](cplx v) { return v * (1.0L + v) / ((1.0L - v) * (1.0L - v) * (1.0L - v)); };

    cplx sp = 1.0L / 12.0L + term(u), sd = dterm(u);
    cplx qn = 1;
    for (int n = 1; n < 2000; ++n) {
        qn *= q;
        cplx a = qn * u, b = qn * ui;
        sp += term(a) + term(b) - 2.0L * term(qn);
        sd += dterm(a) - dterm(b);
        if (std::pow(aq, n) * bound * n < 1e-22L)
            break;
    }
    return {k * k * sp, k * k * k * sd};
}

} // namespace

cplx weierstrass_p(cplx z, PeriodLattice const &L) { return p_series(z, L).p; }

cplx weierstrass_p_prime(cplx z, PeriodLattice const &L) { return p_series(z, L).dp; }

ComplexPoint elliptic_exp(Curve const &curve, PeriodLattice const &L, cplx z)
{
    cplx zr = reduce_mod_lattice(z, L);
    ComplexPoint out;
    if (std::abs(zr) < 1e-15L * std::abs(L.r1)) {
        out.infinity = true;
        return out;
    }
    PSeries s = p_series(zr, L);
    real b2 = to_long_double(curve.b2());
    real a1 = to_long_double(curve.a1()), a3 = to_long_double(curve.a3());
    out.x = s.p - b2 / 12;
    out.y = (s.dp - a1 * out.x - a3) / 2.0L;
    return out;
}

} // namespace ellq
