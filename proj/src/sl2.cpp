#include "ellq/sl2.hpp"

#include <numbers>
#include <random>

namespace ellq
{

std::string to_string(OrbitTag t)
{
    switch (t) {
    case OrbitTag::hyperbolic:
        return "hyperbolic";
    case OrbitTag::elliptic:
        return "elliptic";
    case OrbitTag::nilpotent_plus:
        return "nilpotent_plus";
    case OrbitTag::nilpotent_minus:
        return "nilpotent_minus";
    case OrbitTag::zero:
        return "zero";
    }
    return "zero";
}

std::string to_string(ConeKind k)
{
    switch (k) {
    case ConeKind::C:
        return "C";
    case ConeKind::D:
        return "D";
    case ConeKind::E:
        return "E";
    }
    return "C";
}

namespace
{

template <class T> OrbitTag tag_for(T const &delta, bool cone, T const &z, bool is_zero)
{
    if (is_zero)
        return OrbitTag::zero;
    if (!cone)
        return delta > 0 ? OrbitTag::hyperbolic : OrbitTag::elliptic;
    return z > 0 ? OrbitTag::nilpotent_plus : OrbitTag::nilpotent_minus;
}

} // namespace

OrbitClass<double> classify(LieD const &f, double tolerance)
{
    double d = f.delta();
    bool is_zero = f.x == 0 && f.y == 0 && f.z == 0;
    bool cone = tolerance == 0 ? d == 0 : std::fabs(d) <= tolerance;
    OrbitClass<double> out{tag_for(d, cone, f.z, is_zero), d};
    if (cone && !is_zero && f.z == 0)
        out.tag = d >= 0 ? OrbitTag::hyperbolic : OrbitTag::elliptic;
    return out;
}

OrbitClass<mpq_class> classify(LieQ const &f)
{
    mpq_class d = f.delta();
    bool is_zero = f.x == 0 && f.y == 0 && f.z == 0;
    return {tag_for<mpq_class>(d, d == 0, f.z, is_zero), d};
}

GroupD exp_map(LieD const &f)
{
    double d = f.delta();
    double c, s;
    if (d > 0) {
        double r = std::sqrt(d);
        c = std::cosh(r);
        s = r < 1e-8 ? 1 + d / 6 : std::sinh(r) / r;
    } else if (d < 0) {
        double r = std::sqrt(-d);
        c = std::cos(r);
        s = r < 1e-8 ? 1 + d / 6 : std::sin(r) / r;
    } else {
        c = 1;
        s = 1;
    }
    auto m = f.matrix();
    return {c + s * m[0], s * m[1], s * m[2], c + s * m[3]};
}

GroupD exp_series(LieD const &f, int terms)
{
    std::array<double, 4> sum{1, 0, 0, 1}, power{1, 0, 0, 1};
    auto m = f.matrix();
    for (int k = 1; k < terms; ++k) {
        power = mat_mul(power, m);
        for (auto &v : power)
            v /= k;
        for (int i = 0; i < 4; ++i)
            sum[i] += power[i];
    }
    return {sum[0], sum[1], sum[2], sum[3]};
}

cplxd mobius(GroupD const &g, cplxd tau)
{
    if (!(tau.imag() > 0))
        throw domain_error("mobius: tau must lie in the upper half plane");
    return (g.a * tau + g.b) / (g.c * tau + g.d);
}

cplxd omega(LieD const &f) { return mobius(exp_map(f), cplxd(0, 1)); }

OmegaInverse omega_inverse_nilpotent(cplxd tau, int branch)
{
    if (!(tau.imag() > 0))
        throw domain_error("omega_inverse_nilpotent: tau must lie in the upper half plane");
    if (branch != 0 && branch != 1 && branch != -1)
        throw domain_error("omega_inverse_nilpotent: branch must be -1, 0 or +1");
    // exp F = [[1 + x, u], [v, 1 - x]] with uv = -x^2; with d = 1 - x,
    // Q d^2 - 4(1 + t) d + 4 - s^2 / t = 0 where Q = (1 + t)^2 + s^2.
    long double s = tau.real(), t = tau.imag();
    long double Q = (1 + t) * (1 + t) + s * s;
    long double R = std::sqrt(((1 - t) * (1 - t) + s * s) / t);
    auto solve = [&](int sigma) {
        long double d = (2 * (1 + t) + sigma * s * R) / Q;
        long double v = (2 * s - sigma * (1 + t) * R) / Q;
        long double x = 1 - d;
        long double u = std::fabs(v) >= std::fabs(d) ? -x * x / v : (s / t - (2 - d) * v) / d;
        LieD f{static_cast<double>(x), static_cast<double>((u + v) / 2), static_cast<double>((u - v) / 2)};
        OmegaInverse out{f, std::abs(omega(f) - tau), sigma};
        return out;
    };
    if (branch != 0)
        return solve(branch);
    OmegaInverse p = solve(1), m = solve(-1);
    return std::fabs(m.element.x) < std::fabs(p.element.x) ? m : p;
}

LieD ConeSet::point(double t, int sheet) const
{
    double a = anchor.x, b = anchor.y, c = anchor.z;
    switch (kind) {
    case ConeKind::C:
        return {c * std::cos(t), c * std::sin(t), c};
    case ConeKind::D:
        if (b == 0)
            return {t, 0, sheet * t};
        return {std::fabs(b) * std::sinh(t), b, sheet * std::fabs(b) * std::cosh(t)};
    case ConeKind::E:
        if (a == 0)
            return {0, t, sheet * t};
        return {a, std::fabs(a) * std::sinh(t), sheet * std::fabs(a) * std::cosh(t)};
    }
    return anchor;
}

std::array<ConeSet, 3> cone_sets_at(cplxd tau)
{
    OmegaInverse inv = omega_inverse_nilpotent(tau);
    if (std::fabs(inv.element.z) < 1e-12) {
        inv = omega_inverse_nilpotent(tau, -inv.branch);
        if (std::fabs(inv.element.z) < 1e-12)
            throw domain_error("cone_sets: every nilpotent preimage of tau has c = 0");
    }
    LieD F = inv.element;
    std::array<ConeSet, 3> out;
    ConeKind kinds[3] = {ConeKind::C, ConeKind::D, ConeKind::E};
    for (int i = 0; i < 3; ++i) {
        ConeSet &s = out[i];
        s.kind = kinds[i];
        s.anchor = F;
        s.anchor_branch = inv.branch;
        s.anchor_residual = inv.residual;
    }
    out[0].anchor_parameter = std::atan2(F.y / F.z, F.x / F.z);
    out[1].anchor_sheet = F.z > 0 ? 1 : -1;
    out[1].anchor_parameter = F.y == 0 ? F.x : std::asinh(F.x / std::fabs(F.y));
    if (F.y == 0)
        out[1].anchor_sheet = F.z / F.x > 0 ? 1 : -1;
    out[2].anchor_sheet = F.z > 0 ? 1 : -1;
    out[2].anchor_parameter = F.x == 0 ? F.y : std::asinh(F.y / std::fabs(F.x));
    if (F.x == 0)
        out[2].anchor_sheet = F.z / F.y > 0 ? 1 : -1;
    return out;
}

namespace
{

ConeSample make_sample(LieD const &f) { return {f, omega(f), f.delta()}; }

} // namespace

std::vector<ConeSample> image_sample(ConeSet const &set, std::size_t n, std::uint64_t seed, double range)
{
    std::vector<ConeSample> out;
    if (n == 0)
        return out;
    out.push_back(make_sample(set.anchor));
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle(0, 2 * std::numbers::pi), param(-range, range);
    std::bernoulli_distribution coin(0.5);
    while (out.size() < n) {
        if (set.kind == ConeKind::C) {
            out.push_back(make_sample(set.point(angle(rng))));
        } else {
            double t = param(rng);
            out.push_back(make_sample(set.point(t, coin(rng) ? 1 : -1)));
        }
    }
    return out;
}

std::vector<ConeSample> sample_cone(std::size_t n, std::uint64_t seed, int sign)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> box(-1, 1);
    std::bernoulli_distribution coin(0.5);
    std::vector<ConeSample> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        double x = box(rng), y = box(rng);
        int sg = sign != 0 ? (sign > 0 ? 1 : -1) : (coin(rng) ? 1 : -1);
        out.push_back(make_sample({x, y, sg * std::hypot(x, y)}));
    }
    return out;
}

std::vector<cplxd> k_orbit(cplxd tau, std::vector<double> const &angles)
{
    std::vector<cplxd> out;
    out.reserve(angles.size());
    for (double t : angles) {
        double c = std::cos(t), s = std::sin(t);
        out.push_back(mobius({c, s, -s, c}, tau));
    }
    return out;
}

} // namespace ellq
