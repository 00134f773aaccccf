#include "ellq/modular.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <set>
#include <sstream>
#include <tuple>

#include "ellq/heegner.hpp"
#include "ellq/numtheory.hpp"
#include "ellq/parallel.hpp"

namespace ellq
{

namespace
{

constexpr long double pi_l = std::numbers::pi_v<long double>;

std::vector<mpz_class> divisor_power_sums(std::size_t limit, unsigned k)
{
    std::vector<mpz_class> s(limit + 1, 0);
    for (std::size_t d = 1; d <= limit; ++d) {
        mpz_class dk;
        mpz_ui_pow_ui(dk.get_mpz_t(), d, k);
        for (std::size_t m = d; m <= limit; m += d)
            s[m] += dk;
    }
    return s;
}

QSeries eisenstein(std::size_t terms, unsigned k, long scale)
{
    QSeries out;
    out.valuation = 0;
    out.coeffs.assign(terms, 0);
    if (terms == 0)
        return out;
    auto sig = divisor_power_sums(terms, k);
    out.coeffs[0] = 1;
    for (std::size_t n = 1; n < terms; ++n)
        out.coeffs[n] = scale * sig[n];
    return out;
}

} // namespace

mpq_class QSeries::coefficient(int n) const
{
    if (n < valuation)
        return 0;
    std::size_t i = static_cast<std::size_t>(n - valuation);
    if (i >= coeffs.size())
        throw domain_error("QSeries: coefficient of q^" + std::to_string(n) + " is past the truncation");
    return coeffs[i];
}

QSeries QSeries::operator*(QSeries const &o) const
{
    QSeries out;
    out.valuation = valuation + o.valuation;
    std::size_t len = std::min(length(), o.length());
    out.coeffs.assign(len, 0);
    for (std::size_t i = 0; i < len; ++i) {
        if (coeffs[i] == 0)
            continue;
        for (std::size_t j = 0; i + j < len; ++j)
            out.coeffs[i + j] += coeffs[i] * o.coeffs[j];
    }
    return out;
}

QSeries QSeries::operator+(QSeries const &o) const
{
    QSeries out;
    out.valuation = std::min(valuation, o.valuation);
    int top = std::min(valuation + static_cast<int>(length()), o.valuation + static_cast<int>(o.length()));
    for (int n = out.valuation; n < top; ++n)
        out.coeffs.push_back(coefficient(n) + o.coefficient(n));
    return out;
}

QSeries QSeries::operator-(QSeries const &o) const { return *this + o.scaled(-1); }

QSeries QSeries::scaled(mpq_class const &s) const
{
    QSeries out = *this;
    for (auto &c : out.coeffs)
        c *= s;
    return out;
}

QSeries QSeries::normalized() const
{
    QSeries out;
    std::size_t i = 0;
    while (i < coeffs.size() && coeffs[i] == 0)
        ++i;
    out.valuation = valuation + static_cast<int>(i);
    out.coeffs.assign(coeffs.begin() + static_cast<std::ptrdiff_t>(i), coeffs.end());
    return out;
}

QSeries QSeries::inverse() const
{
    QSeries a = normalized();
    if (a.coeffs.empty())
        throw domain_error("QSeries: inverse of the zero series");
    QSeries out;
    out.valuation = -a.valuation;
    std::size_t len = a.length();
    out.coeffs.assign(len, 0);
    mpq_class inv0 = 1 / a.coeffs[0];
    out.coeffs[0] = inv0;
    for (std::size_t k = 1; k < len; ++k) {
        mpq_class s = 0;
        for (std::size_t i = 1; i <= k; ++i)
            s += a.coeffs[i] * out.coeffs[k - i];
        out.coeffs[k] = -s * inv0;
    }
    return out;
}

QSeries eisenstein_e4(std::size_t terms) { return eisenstein(terms, 3, 240); }
QSeries eisenstein_e6(std::size_t terms) { return eisenstein(terms, 5, -504); }

QSeries delta_series(std::size_t terms)
{
    QSeries e4 = eisenstein_e4(terms + 1), e6 = eisenstein_e6(terms + 1);
    QSeries d = (e4 * e4 * e4 - e6 * e6).scaled(mpq_class(1, 1728));
    QSeries out;
    out.valuation = 1;
    out.coeffs.assign(d.coeffs.begin() + 1, d.coeffs.end());
    return out;
}

QSeries j_series(std::size_t T)
{
    if (T < 1)
        throw domain_error("j_series: needs T >= 1");
    QSeries e4 = eisenstein_e4(T + 3);
    return e4 * e4 * e4 * delta_series(T + 2).inverse();
}

long double j_coefficient_bound(std::size_t n)
{
    long double x = static_cast<long double>(n);
    return std::exp(4 * pi_l * std::sqrt(x)) / (std::sqrt(2.0L) * std::pow(x, 0.75L));
}

long double j_tail_bound(std::size_t T, long double abs_q)
{
    if (abs_q >= 1)
        return INFINITY;
    if (abs_q == 0)
        return 0;
    long double lq = std::log(abs_q);
    long double peak = std::pow(2 * pi_l / -lq, 2);
    long double sum = 0;
    for (std::size_t n = T + 1; n < 100000000; ++n) {
        long double x = static_cast<long double>(n);
        long double lt = 4 * pi_l * std::sqrt(x) - 0.5L * std::log(2.0L) - 0.75L * std::log(x) + x * lq;
        long double term = std::exp(lt);
        sum += term;
        if (x > peak && (term < 1e-25L * sum || term < 1e-300L))
            return sum;
    }
    return INFINITY;
}

namespace
{

std::vector<long double> const &j_table(std::size_t T)
{
    static std::mutex lock;
    static std::vector<long double> table;
    std::lock_guard<std::mutex> guard(lock);
    if (table.size() < T + 2) {
        QSeries j = j_series(std::max<std::size_t>(T, 200));
        table.clear();
        for (auto const &c : j.coeffs)
            table.push_back(to_long_double(c));
    }
    return table;
}

} // namespace

JValue j_eval(cplxl tau, std::size_t T, long double tolerance)
{
    if (!(tau.imag() > 0))
        throw domain_error("j_eval: tau must lie in the upper half plane");
    if (T < 1)
        throw domain_error("j_eval: needs T >= 1");
    auto const &c = j_table(T);
    cplxl q = std::exp(cplxl(0, 2 * pi_l) * tau);
    cplxl s = 0;
    for (std::size_t n = T + 1; n-- > 0;)
        s = s * q + c[n + 1];
    JValue out;
    out.value = s + 1.0L / q;
    out.terms = T;
    out.tail = j_tail_bound(T, std::abs(q));
    if (!(out.tail <= tolerance * std::max(1.0L, std::abs(out.value))))
        throw domain_error("j_eval: Im tau too small for " + std::to_string(T) + " terms");
    return out;
}

cplxl reduce_to_fundamental(cplxl tau)
{
    if (!(tau.imag() > 0))
        throw domain_error("reduce_to_fundamental: tau must lie in the upper half plane");
    for (int it = 0; it < 10000; ++it) {
        tau -= std::round(tau.real());
        if (std::norm(tau) < 1 - 1e-15L)
            tau = -1.0L / tau;
        else
            return tau;
    }
    throw std::logic_error("reduce_to_fundamental: no convergence");
}

JValue j_value(cplxl tau, std::size_t T) { return j_eval(reduce_to_fundamental(tau), T, 1e-6L); }

cplxl CMPoint::tau() const
{
    long double r = std::sqrt(static_cast<long double>(radicand));
    return half ? cplxl(0.5L, r / 2) : cplxl(0, r);
}

std::string CMPoint::tau_string() const
{
    std::string root = radicand == 1 ? "i" : "i*sqrt(" + std::to_string(radicand) + ")";
    if (radicand == 4)
        root = "2*i";
    return half ? "(1+" + root + ")/2" : root;
}

std::string CMPoint::j_string() const
{
    if (j == 0)
        return "0";
    std::string s = sign < 0 ? "-" : "";
    for (std::size_t i = 0; i < j_factors.size(); ++i) {
        if (i)
            s += "*";
        s += std::to_string(j_factors[i].first);
        if (j_factors[i].second != 1)
            s += "^" + std::to_string(j_factors[i].second);
    }
    return s;
}

std::vector<CMPoint> const &cm_points()
{
    static std::vector<CMPoint> const points = [] {
        struct Row
        {
            bool half;
            int m, sign;
            std::vector<std::pair<int, int>> f;
        };
        std::vector<Row> rows = {
            {true, 3, 1, {}},
            {false, 1, 1, {{2, 6}, {3, 3}}},
            {true, 7, -1, {{3, 3}, {5, 3}}},
            {false, 2, 1, {{2, 6}, {5, 3}}},
            {true, 11, -1, {{2, 15}}},
            {false, 3, 1, {{2, 4}, {3, 3}, {5, 3}}},
            {false, 4, 1, {{2, 3}, {3, 3}, {11, 3}}},
            {true, 19, -1, {{2, 15}, {3, 3}}},
            {true, 27, -1, {{2, 15}, {3, 1}, {5, 3}}},
            {false, 7, 1, {{3, 3}, {5, 3}, {17, 3}}},
            {true, 43, -1, {{2, 18}, {3, 3}, {5, 3}}},
            {true, 67, -1, {{2, 15}, {3, 3}, {5, 3}, {11, 3}}},
            {true, 163, -1, {{2, 18}, {3, 3}, {5, 3}, {23, 3}, {29, 3}}},
        };
        std::vector<CMPoint> out;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            CMPoint p;
            p.index = static_cast<int>(i + 1);
            p.half = rows[i].half;
            p.radicand = rows[i].m;
            p.sign = rows[i].sign;
            p.j_factors = rows[i].f;
            if (rows[i].f.empty()) {
                p.j = 0;
            } else {
                p.j = p.sign;
                for (auto [q, e] : rows[i].f) {
                    mpz_class pe;
                    mpz_ui_pow_ui(pe.get_mpz_t(), q, e);
                    p.j *= pe;
                }
            }
            out.push_back(p);
        }
        return out;
    }();
    return points;
}

CMPoint const &cm_point(int index)
{
    if (index < 1 || index > 13)
        throw domain_error("CM point index must be in 1..13, got " + std::to_string(index));
    return cm_points()[index - 1];
}

CMTableReport cm_table_verify(std::size_t terms, double relative_tolerance, double absolute_tolerance)
{
    CMTableReport rep;
    rep.terms = terms;
    rep.relative_tolerance = relative_tolerance;
    rep.absolute_tolerance = absolute_tolerance;
    rep.pass = true;
    for (auto const &p : cm_points()) {
        CMCheck row;
        row.point = p;
        JValue v = j_eval(p.tau(), terms, std::numeric_limits<long double>::infinity());
        row.computed = v.value;
        row.tail = static_cast<double>(v.tail);
        long double expected = to_long_double(p.j);
        if (p.j == 0) {
            row.absolute = true;
            row.error = static_cast<double>(std::abs(row.computed));
            row.pass = row.error < absolute_tolerance && row.tail < absolute_tolerance;
        } else {
            row.error = static_cast<double>(std::abs(row.computed - expected) / std::fabs(expected));
            row.tail /= static_cast<double>(std::fabs(expected));
            row.pass = row.error < relative_tolerance && row.tail < relative_tolerance;
        }
        rep.pass = rep.pass && row.pass;
        rep.rows.push_back(row);
    }
    return rep;
}

std::vector<cplxd> k_orbit_sample(int index, std::vector<double> const &angles)
{
    cplxl t = cm_point(index).tau();
    return k_orbit(cplxd(static_cast<double>(t.real()), static_cast<double>(t.imag())), angles);
}

std::array<ConeSet, 3> cone_sets(int index)
{
    if (index == 2)
        throw domain_error("cone sets are defined for j != 2 only");
    cplxl t = cm_point(index).tau();
    return cone_sets_at(cplxd(static_cast<double>(t.real()), static_cast<double>(t.imag())));
}

Curve curve_from_j(mpq_class const &j_in)
{
    mpq_class j = j_in;
    j.canonicalize();
    if (j == 0)
        return Curve::short_weierstrass(0, 1);
    if (j == 1728)
        return Curve::short_weierstrass(1, 0);
    mpz_class p = j.get_num(), q = j.get_den();
    mpz_class r = 1728 * q - p;
    mpz_class A = 3 * p * r * q * q;
    mpz_class B = 2 * p * r * r * q * q * q;
    std::set<mpz_class> primes = {2, 3};
    for (mpz_class const &n : {p, r, q})
        if (abs(n) > 1)
            for (auto const &pe : factor(n))
                primes.insert(pe.first);
    for (auto const &l : primes) {
        mpz_class l4 = l * l * l * l, l6 = l4 * l * l;
        while (mpz_divisible_p(A.get_mpz_t(), l4.get_mpz_t()) && mpz_divisible_p(B.get_mpz_t(), l6.get_mpz_t())) {
            A /= l4;
            B /= l6;
        }
    }
    Curve E = Curve::short_weierstrass(A, B);
    if (E.j_invariant() != j)
        throw std::logic_error("curve_from_j: j-invariant mismatch");
    return E;
}

Curve minimal_twist(Curve const &E)
{
    if (!E.is_short())
        throw domain_error("minimal_twist: short model required");
    mpz_class A = E.a4(), B = E.a6();
    if (A == 0 || B == 0 || log_abs(E.discriminant()) > 60 * std::log(10.0L))
        return E;
    std::vector<mpz_class> primes;
    for (auto const &pe : factor(gcd(A, B))) {
        mpz_class l = pe.first;
        if (mpz_divisible_p(A.get_mpz_t(), mpz_class(l * l).get_mpz_t()) &&
            mpz_divisible_p(B.get_mpz_t(), mpz_class(l * l * l).get_mpz_t()))
            primes.push_back(l);
    }
    if (primes.size() > 12)
        primes.resize(12);
    struct Candidate
    {
        Curve curve;
        long double log_disc;
        mpz_class conductor;
        mpz_class d;
    };
    std::optional<Candidate> best;
    for (std::size_t mask = 0; mask < (std::size_t(1) << primes.size()); ++mask)
        for (int sign : {1, -1}) {
            mpz_class d = sign;
            for (std::size_t i = 0; i < primes.size(); ++i)
                if (mask >> i & 1)
                    d *= primes[i];
            Curve C = Curve::short_weierstrass(A / (d * d), B / (d * d * d));
            Curve M = minimal_model(C);
            Candidate c{C, log_abs(M.discriminant()), heuristic_conductor(M), d};
            auto key = [](Candidate const &x) {
                return std::make_tuple(x.log_disc, x.conductor, mpz_class(abs(x.d)), x.d < 0);
            };
            if (!best || key(c) < key(*best))
                best = c;
        }
    return best->curve;
}

namespace
{

mpq_class exact_value(long double x)
{
    int e = 0;
    long double m = std::frexp(x, &e);
    auto bits = static_cast<unsigned long long>(std::ldexp(std::fabs(m), 64));
    mpz_class z;
    mpz_import(z.get_mpz_t(), 1, 1, sizeof bits, 0, 0, &bits);
    mpq_class q(z);
    if (e >= 64)
        mpq_mul_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<unsigned long>(e - 64));
    else
        mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<unsigned long>(64 - e));
    return m < 0 ? mpq_class(-q) : q;
}

} // namespace

std::optional<mpq_class> snap_rational(long double x, long max_den, double residual)
{
    if (!std::isfinite(x))
        return std::nullopt;
    mpq_class r = exact_value(x);
    mpq_class tol(static_cast<double>(residual * std::max(1.0L, std::fabs(x))));
    auto close = [&](mpq_class const &c) { return abs(mpq_class(r - c)) <= tol; };
    mpq_class shifted = r + mpq_class(1, 2);
    mpz_class nearest;
    mpz_fdiv_q(nearest.get_mpz_t(), shifted.get_num_mpz_t(), shifted.get_den_mpz_t());
    if (close(mpq_class(nearest)))
        return mpq_class(nearest);
    // Convergents h/k of the continued fraction of r, smallest k first.
    mpz_class h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    mpq_class rest = r;
    while (true) {
        mpz_class a;
        mpz_fdiv_q(a.get_mpz_t(), rest.get_num_mpz_t(), rest.get_den_mpz_t());
        mpz_class h = a * h1 + h0, k = a * k1 + k0;
        if (k > max_den)
            return std::nullopt;
        mpq_class c(h, k);
        c.canonicalize();
        if (close(c))
            return c;
        mpq_class frac = rest - a;
        if (frac == 0)
            return std::nullopt;
        rest = 1 / frac;
        h0 = h1;
        h1 = h;
        k0 = k1;
        k1 = k;
    }
}

std::string to_string(HarnessSet s)
{
    switch (s) {
    case HarnessSet::orbit:
        return "orbit";
    case HarnessSet::X:
        return "X";
    case HarnessSet::Y:
        return "Y";
    case HarnessSet::Z:
        return "Z";
    }
    return "orbit";
}

std::string to_string(Verdict v)
{
    switch (v) {
    case Verdict::consistent:
        return "consistent";
    case Verdict::inconsistent:
        return "inconsistent";
    case Verdict::inconclusive:
        return "inconclusive";
    }
    return "inconclusive";
}

namespace
{

constexpr double rank_tolerance = 0.75;
constexpr double vanishing = 1e-6;

std::string short_number(double v)
{
    std::ostringstream o;
    o << v;
    return o.str();
}

} // namespace

Evidence analyze_curve(Curve const &curve, HarnessOptions const &opts)
{
    Evidence ev;
    ev.curve = curve;
    ev.j = curve.j_invariant();
    double log10_disc = static_cast<double>(log_abs(curve.discriminant()) / std::log(10.0L));
    if (opts.xmax >= 100)
        ev.slope = bsd_product(curve, opts.xmax, opts.jobs).slope;
    if (log10_disc > opts.max_log10_discriminant) {
        ev.note = "discriminant too large for torsion and conductor";
        return ev;
    }
    ev.torsion = torsion_subgroup(curve).structure;
    Curve M = minimal_model(curve);
    if (opts.conductor_lookup)
        if (auto N = opts.conductor_lookup(M))
            ev.conductor = ConductorInfo{*N, "registry"};
    if (!ev.conductor)
        if (auto found = conductor_search(M, std::min(opts.max_conductor, 100000000LL)))
            ev.conductor = ConductorInfo{found->N, "search"};
    if (!ev.conductor) {
        mpz_class N = heuristic_conductor(M);
        if (N.fits_slong_p() && N <= mpz_class(static_cast<long>(opts.max_conductor)))
            ev.conductor = ConductorInfo{N.get_si(), "heuristic"};
    }
    if (!ev.conductor) {
        ev.note = "no conductor available";
        return ev;
    }
    if (ev.conductor->N > opts.max_conductor) {
        ev.note = "conductor too large for the L-series cutoff";
        return ev;
    }
    LSeriesConfig cfg;
    cfg.conductor = ev.conductor->N;
    ev.central = central_value(M, cfg);
    if (ev.central->inconclusive) {
        ev.note = "root number not detected; conductor may be wrong";
        return ev;
    }
    if (ev.central->epsilon == 1) {
        bool zero = std::fabs(ev.central->L1) <= vanishing;
        ev.analytic_rank = zero ? 2 : 0;
        ev.rank_is_lower_bound = zero;
    } else {
        bool zero = std::fabs(ev.central->L1prime) <= vanishing;
        ev.analytic_rank = zero ? 3 : 1;
        ev.rank_is_lower_bound = zero;
    }
    if (!ev.slope) {
        ev.note = "no product estimate";
        return ev;
    }
    double r = *ev.analytic_rank, s = *ev.slope;
    bool ok = ev.rank_is_lower_bound ? s >= r - rank_tolerance : std::fabs(s - r) <= rank_tolerance;
    ev.verdict = ok ? Verdict::consistent : Verdict::inconsistent;
    return ev;
}

HarnessReport conjecture_harness(int index, HarnessSet set, std::size_t budget, HarnessOptions const &opts)
{
    cm_point(index);
    if (set != HarnessSet::orbit && index == 2)
        throw domain_error("conjecture harness: the sets X, Y, Z exclude j = 2");
    if (budget == 0)
        throw domain_error("conjecture harness: budget must be positive");

    HarnessReport rep;
    rep.index = index;
    rep.set = set;
    rep.budget = budget;
    rep.header = "Evidence only: samples tau in the set, tests E_tau numerically; this cannot prove the conjecture.";
    rep.interpretation =
        "E_tau is treated as defined over Q when j(tau) has a continued-fraction convergent p/q with q <= " +
        std::to_string(opts.max_den) + " within relative residual " + short_number(opts.residual) +
        "; the model is the twist of the integral short curve with that j having the smallest minimal discriminant" +
        (opts.twists ? ", with twists by +-1, +-2, +-3" : "") +
        ". For |j| above about 1e8 nearly every value has such a convergent, so those snaps are weak evidence.";

    std::vector<cplxd> taus;
    if (set == HarnessSet::orbit) {
        std::vector<double> angles;
        for (std::size_t m = 0; m < budget; ++m)
            angles.push_back(std::numbers::pi * static_cast<double>(m) / static_cast<double>(budget));
        taus = k_orbit_sample(index, angles);
    } else {
        auto sets = cone_sets(index);
        ConeSet const &c = sets[set == HarnessSet::X ? 0 : set == HarnessSet::Y ? 1 : 2];
        for (auto const &s : image_sample(c, budget, opts.seed))
            taus.push_back(s.image);
    }

    rep.samples.resize(taus.size());
    parallel_for(taus.size(), opts.jobs, [&](std::size_t i) {
        HarnessSample &s = rep.samples[i];
        s.tau = taus[i];
        try {
            s.j = j_value(cplxl(taus[i].real(), taus[i].imag())).value;
        } catch (domain_error const &) {
            s.j = cplxl(NAN, NAN);
            return;
        }
        long double scale = std::max(1.0L, std::abs(s.j));
        if (std::fabs(s.j.imag()) > opts.residual * scale)
            return;
        s.snapped = snap_rational(s.j.real(), opts.max_den, opts.residual);
        if (s.snapped)
            s.snap_residual = static_cast<double>(std::fabs(s.j.real() - to_long_double(*s.snapped)) / scale);
    });

    std::map<mpq_class, std::size_t> first;
    for (std::size_t i = 0; i < rep.samples.size(); ++i)
        if (rep.samples[i].snapped && !first.count(*rep.samples[i].snapped))
            first[*rep.samples[i].snapped] = i;
    std::vector<std::pair<std::size_t, mpq_class>> jobs_list;
    for (auto const &[j, i] : first)
        jobs_list.emplace_back(i, j);
    std::sort(jobs_list.begin(), jobs_list.end(),
              [](auto const &a, auto const &b) { return a.first < b.first; });

    std::vector<long long> twists = opts.twists ? std::vector<long long>{1, -1, 2, -2, 3, -3}
                                                : std::vector<long long>{1};
    HarnessOptions inner = opts;
    inner.jobs = 1;
    std::vector<Evidence> ev(jobs_list.size() * twists.size());
    parallel_for(ev.size(), opts.jobs, [&](std::size_t k) {
        auto const &[sample, j] = jobs_list[k / twists.size()];
        long long d = twists[k % twists.size()];
        Curve E = minimal_twist(curve_from_j(j));
        if (d != 1)
            E = twist(E, d);
        ev[k] = analyze_curve(E, inner);
        ev[k].sample = sample;
        ev[k].twist = d;
        ev[k].j = j;
    });
    rep.evidence = std::move(ev);
    return rep;
}

} // namespace ellq
