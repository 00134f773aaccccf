#include "ellq/heegner.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <set>
#include <stdexcept>
#include <tuple>

#include "ellq/heights.hpp"
#include "ellq/l_series.hpp"
#include "ellq/local_data.hpp"
#include "ellq/numtheory.hpp"

namespace ellq
{

namespace
{

constexpr long double two_pi = 2 * std::numbers::pi_v<long double>;

void require_discriminant(long long D)
{
    long long m = ((D % 4) + 4) % 4;
    if (D >= 0 || (m != 0 && m != 1))
        throw domain_error("discriminant must be negative and 0 or 1 mod 4, got " + std::to_string(D));
}

long long floor_div(long long a, long long b)
{
    long long q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0)))
        --q;
    return q;
}

} // namespace

std::string QuadraticForm::to_string() const
{
    return "(" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + ")";
}

QuadraticForm reduce(QuadraticForm f)
{
    long long D = f.discriminant();
    if (D >= 0 || f.a <= 0)
        throw domain_error("reduce: form " + f.to_string() + " is not positive definite");
    for (;;) {
        if (f.b > f.a || f.b <= -f.a) {
            long long k = floor_div(f.a - f.b, 2 * f.a);
            f.b += 2 * k * f.a;
            f.c = (f.b * f.b - D) / (4 * f.a);
        }
        if (f.a > f.c) {
            f = {f.c, -f.b, f.a};
            continue;
        }
        if (f.a == f.c && f.b < 0)
            f.b = -f.b;
        return f;
    }
}

std::vector<QuadraticForm> reduced_forms(long long D)
{
    require_discriminant(D);
    std::vector<QuadraticForm> out;
    long long absD = -D;
    for (long long a = 1; 3 * a * a <= absD; ++a) {
        for (long long b = -a + 1; b <= a; ++b) {
            long long num = b * b - D;
            if (num % (4 * a) != 0)
                continue;
            long long c = num / (4 * a);
            if (c < a || (a == c && b < 0))
                continue;
            if (std::gcd(std::gcd(a, std::llabs(b)), c) != 1)
                continue;
            out.push_back({a, b, c});
        }
    }
    return out;
}

int class_number(long long D) { return static_cast<int>(reduced_forms(D).size()); }

int half_unit_count(long long D)
{
    if (D == -3)
        return 3;
    if (D == -4)
        return 2;
    return 1;
}

std::optional<long long> heegner_residue(long long N, long long D)
{
    if (N < 1)
        throw domain_error("heegner_residue: N must be positive");
    long long m = 4 * N;
    long long target = ((D % m) + m) % m;
    for (long long r = 0; r < 2 * N + 1; ++r)
        if ((r * r) % m == target)
            return r;
    return std::nullopt;
}

HeegnerSystem theta_orbit_reps(long long N, long long D, long long r)
{
    require_discriminant(D);
    if (N < 1)
        throw domain_error("theta_orbit_reps: N must be positive");
    long long m = 4 * N;
    if ((((r * r - D) % m) + m) % m != 0)
        throw domain_error("theta_orbit_reps: D = " + std::to_string(D) + " is not r^2 mod 4N for r = " +
                           std::to_string(r));
    if (std::gcd(std::llabs(D), N) != 1)
        throw domain_error("theta_orbit_reps: gcd(D, N) must be 1");

    HeegnerSystem sys;
    sys.N = N;
    sys.D = D;
    sys.r = r;
    sys.u = half_unit_count(D);
    std::size_t h = reduced_forms(D).size();
    std::set<std::tuple<long long, long long, long long>> seen;
    long long b0 = ((r % (2 * N)) + 2 * N) % (2 * N);
    for (long long k = 1; sys.forms.size() < h; ++k) {
        if (k > 100000)
            throw std::logic_error("theta_orbit_reps: representatives not found");
        long long a = N * k;
        std::vector<long long> bs;
        long long first = b0 + 2 * N * floor_div(-a - b0, 2 * N);
        for (long long b = first; b <= a; b += 2 * N)
            if (b > -a)
                bs.push_back(b);
        std::sort(bs.begin(), bs.end(), [](long long x, long long y) {
            if (std::llabs(x) != std::llabs(y))
                return std::llabs(x) < std::llabs(y);
            return x > y;
        });
        for (long long b : bs) {
            long long num = b * b - D;
            if (num % (4 * a) != 0)
                continue;
            long long c = num / (4 * a);
            if (std::gcd(std::gcd(a, std::llabs(b)), c) != 1)
                continue;
            QuadraticForm red = reduce({a, b, c});
            if (!seen.insert({red.a, red.b, red.c}).second)
                continue;
            sys.forms.push_back({a, b, c});
            long double y = std::sqrt(static_cast<long double>(-D)) / (2 * a);
            sys.points.emplace_back(static_cast<long double>(-b) / (2 * a), y);
            if (sys.forms.size() == h)
                break;
        }
    }
    return sys;
}

ModularValue modular_sum(std::vector<long long> const &an, cplx z, std::size_t terms)
{
    if (z.imag() <= 0)
        throw domain_error("modular_param: z must lie in the upper half plane");
    if (an.size() <= terms)
        throw domain_error("modular_param: coefficient table shorter than the term budget");
    cplx q = std::exp(cplx(0, two_pi) * z);
    cplx qn = 1, w = 0;
    for (std::size_t n = 1; n <= terms; ++n) {
        qn *= q;
        if (an[n] != 0)
            w += static_cast<long double>(an[n]) / static_cast<long double>(n) * qn;
    }
    long double aq = std::abs(q);
    // |a_n| / n <= d(n) / sqrt(n) <= sqrt(3)
    long double tail = std::sqrt(3.0L) * std::pow(aq, static_cast<long double>(terms + 1)) / (1 - aq);
    return {w, static_cast<double>(tail)};
}

ComplexPoint modular_param(Curve const &curve, PeriodLattice const &lattice, std::vector<long long> const &an, cplx z,
                           std::size_t terms, double tolerance)
{
    ModularValue v = modular_sum(an, z, terms);
    if (v.tail > tolerance)
        throw domain_error("modular_param: z too close to the real axis for " + std::to_string(terms) + " terms");
    return elliptic_exp(curve, lattice, v.w);
}

std::optional<Point> snap_point(Curve const &curve, ComplexPoint const &p, long max_den, double tolerance)
{
    if (p.infinity)
        return Point::infinity();
    long double scale_x = std::max(1.0L, std::abs(p.x));
    long double scale_y = std::max(1.0L, std::abs(p.y));
    if (std::fabs(p.x.imag()) > tolerance * scale_x || std::fabs(p.y.imag()) > tolerance * scale_y)
        return std::nullopt;
    mpq_class x = best_rational(p.x.real(), mpz_class(max_den));
    if (std::fabs(to_long_double(x) - p.x.real()) > tolerance * scale_x)
        return std::nullopt;
    mpq_class b = curve.a1() * x + curve.a3();
    mpq_class rhs = ((x + curve.a2()) * x + curve.a4()) * x + curve.a6();
    mpq_class disc = b * b + 4 * rhs;
    if (disc < 0)
        return std::nullopt;
    mpz_class rn, rd;
    if (!is_square(disc.get_num(), &rn) || !is_square(disc.get_den(), &rd))
        return std::nullopt;
    mpq_class root(rn, rd);
    root.canonicalize();
    mpq_class y1 = (-b + root) / 2, y2 = (-b - root) / 2;
    long double target = p.y.real();
    mpq_class y = std::fabs(to_long_double(y1) - target) <= std::fabs(to_long_double(y2) - target) ? y1 : y2;
    if (std::fabs(to_long_double(y) - target) > tolerance * scale_y)
        return std::nullopt;
    Point P(x, y);
    if (!curve.contains(P))
        return std::nullopt;
    return P;
}

HeegnerResult heegner_point(Curve const &curve, long long N, long long D, long long r, std::size_t terms)
{
    HeegnerResult out;
    out.system = theta_orbit_reps(N, D, r);
    long double min_im = out.system.points.front().imag();
    for (auto const &z : out.system.points)
        min_im = std::min(min_im, z.imag());
    if (terms == 0) {
        long double aq = std::exp(-two_pi * min_im);
        long double need = (std::log(2 / (1 - aq)) + 16 * std::log(10.0L)) / (two_pi * min_im);
        terms = static_cast<std::size_t>(std::ceil(need)) + 1;
    }
    auto an = an_coefficients(curve, terms);
    auto lattice = period_lattice(curve);
    cplx w = 0;
    for (auto const &z : out.system.points) {
        ModularValue v = modular_sum(an, z, terms);
        if (v.tail > 1e-12)
            throw domain_error("heegner_point: term budget too small for the representatives");
        w += v.w;
    }
    out.w = reduce_mod_lattice(w, lattice);
    out.point = elliptic_exp(curve, lattice, out.w);
    out.snapped = snap_point(curve, out.point);
    if (out.snapped) {
        out.height = canonical_height(curve, *out.snapped);
        out.torsion = out.height < 1e-6;
    }
    return out;
}

Curve twist(Curve const &curve, long long D)
{
    if (D == 0)
        throw domain_error("twist: D must be nonzero");
    if (D == 1)
        return curve;
    mpz_class d = static_cast<long>(D);
    if (curve.a1() == 0 && curve.a3() == 0)
        return Curve(0, d * curve.a2(), 0, d * d * curve.a4(), d * d * d * curve.a6());
    Curve s = integral_short_model(curve).curve;
    return Curve(0, 0, 0, d * d * s.a4(), d * d * d * s.a6());
}

GrossZagierReport gross_zagier_ratio_test(Curve const &curve, long long N, int epsilon, long long D1, long long r1,
                                          long long D2, long long r2, GrossZagierOptions const &opts)
{
    if (epsilon != -1)
        throw domain_error("gross_zagier_ratio_test: needs a curve with epsilon = -1");
    for (long long D : {D1, D2})
        if (D % 2 == 0)
            throw domain_error("gross_zagier_ratio_test: discriminants must be odd");

    GrossZagierReport rep;
    auto side = [&](long long D, long long r, GrossZagierSide &s) {
        s.D = D;
        s.r = r;
        s.u = half_unit_count(D);
        HeegnerResult h = heegner_point(curve, N, D, r, opts.terms);
        s.point = h.snapped;
        if (h.snapped)
            s.height = h.height * opts.height_scale;

        long long M = N * D * D;
        std::size_t cutoff = default_cutoff(static_cast<double>(M));
        auto an = an_coefficients(curve, cutoff);
        for (std::size_t n = 1; n <= cutoff; ++n)
            an[n] *= kronecker(D, static_cast<long long>(n));
        // root number of the twist: epsilon * chi_D(-N), chi_D(-1) = -1 for D < 0
        int sign = epsilon * -kronecker(D, N);
        s.twisted_L1 = central_value_from_an(an, static_cast<double>(M), sign, cutoff).L1;
        return h;
    };
    HeegnerResult h1 = side(D1, r1, rep.first);
    HeegnerResult h2 = side(D2, r2, rep.second);

    if (!h1.snapped || !h2.snapped) {
        rep.vacuous = true;
        rep.note = "Heegner point did not snap to a rational point";
        return rep;
    }
    if (h1.torsion || h2.torsion) {
        rep.vacuous = true;
        rep.note = "Heegner point torsion";
        return rep;
    }
    auto const &a = rep.first, &b = rep.second;
    rep.lhs = a.twisted_L1 * a.u * a.u * std::sqrt(static_cast<double>(-a.D)) * b.height;
    rep.rhs = b.twisted_L1 * b.u * b.u * std::sqrt(static_cast<double>(-b.D)) * a.height;
    double big = std::max(std::fabs(rep.lhs), std::fabs(rep.rhs));
    rep.discrepancy = big == 0 ? 0 : std::fabs(rep.lhs - rep.rhs) / big;

    double p12 = height_pairing(curve, *a.point, *b.point) * opts.height_scale;
    rep.collinearity = std::fabs(p12 * p12 / (a.height * b.height) - 1);
    return rep;
}

} // namespace ellq
