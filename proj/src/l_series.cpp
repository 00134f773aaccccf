#include "ellq/l_series.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ellq/heights.hpp"
#include "ellq/local_data.hpp"
#include "ellq/numtheory.hpp"
#include "ellq/parallel.hpp"
#include "ellq/periods.hpp"
#include "ellq/torsion.hpp"

namespace ellq
{

namespace
{

constexpr long double two_pi = 2 * std::numbers::pi_v<long double>;
constexpr double stable_drift = 1e-8;
constexpr double unstable_drift = 1e-5;

} // namespace

std::size_t default_cutoff(double conductor)
{
    return static_cast<std::size_t>(std::ceil(12 * std::sqrt(conductor) + 50));
}

double dirichlet_tail_bound(double sigma, std::size_t cutoff)
{
    double t = sigma - 0.5;
    double M = static_cast<double>(std::max<std::size_t>(cutoff, 1));
    return t * std::pow(M, 1 - t) * ((std::log(M) + 1) / (t - 1) + 1 / ((t - 1) * (t - 1)));
}

DirichletSum dirichlet_partial(std::vector<long long> const &an, std::complex<double> s, std::size_t cutoff)
{
    if (s.real() <= 1.5)
        throw domain_error("dirichlet_partial: needs Re s > 3/2; use central_value at s = 1");
    if (cutoff < 1 || an.size() <= cutoff)
        throw domain_error("dirichlet_partial: coefficient table shorter than the cutoff");
    std::complex<long double> sum = 0;
    std::complex<long double> ss(s.real(), s.imag());
    for (std::size_t n = 1; n <= cutoff; ++n) {
        if (an[n] == 0)
            continue;
        sum += static_cast<long double>(an[n]) * std::exp(-ss * std::log(static_cast<long double>(n)));
    }
    DirichletSum out;
    out.value = std::complex<double>(static_cast<double>(sum.real()), static_cast<double>(sum.imag()));
    out.tail_bound = dirichlet_tail_bound(s.real(), cutoff);
    out.cutoff = cutoff;
    return out;
}

DirichletSum dirichlet_partial(Curve const &curve, std::complex<double> s, std::size_t cutoff)
{
    if (s.real() <= 1.5)
        throw domain_error("dirichlet_partial: needs Re s > 3/2; use central_value at s = 1");
    return dirichlet_partial(an_coefficients(curve, cutoff), s, cutoff);
}

CentralValue central_value_from_an(std::vector<long long> const &an, double conductor, int epsilon,
                                   std::size_t cutoff)
{
    if (conductor < 1)
        throw domain_error("central_value: conductor must be positive");
    if (epsilon != 0 && epsilon != 1 && epsilon != -1)
        throw domain_error("central_value: epsilon must be +1, -1 or auto");
    if (cutoff == 0)
        cutoff = default_cutoff(conductor);
    if (an.size() <= cutoff)
        throw domain_error("central_value: coefficient table shorter than the cutoff");

    long double rootN = std::sqrt(static_cast<long double>(conductor));
    long double t2 = 1.15L;
    long double a1 = 0, b1 = 0, a2 = 0, b2 = 0, scale = 0, dprime = 0;
    for (std::size_t n = 1; n <= cutoff; ++n) {
        if (an[n] == 0)
            continue;
        long double c = static_cast<long double>(an[n]) / static_cast<long double>(n);
        long double x = two_pi * static_cast<long double>(n) / rootN;
        long double e = std::exp(-x);
        a1 += c * e;
        b1 += c * e;
        a2 += c * std::exp(-x * t2);
        long double slow = std::exp(-x / t2);
        b2 += c * slow;
        scale += std::fabs(c) * slow;
        dprime += c * -std::expint(-x);
    }
    // V_sign(t) = sum c (exp(-x t) + sign exp(-x / t))
    long double vp1 = a1 + b1, vm1 = a1 - b1;
    long double vp2 = a2 + b2, vm2 = a2 - b2;
    if (scale == 0)
        scale = 1;

    CentralValue out;
    out.cutoff = cutoff;
    out.drift_plus = static_cast<double>(std::fabs(vp1 - vp2) / scale);
    out.drift_minus = static_cast<double>(std::fabs(vm1 - vm2) / scale);
    if (epsilon == 0) {
        if (out.drift_plus < stable_drift && out.drift_minus > unstable_drift)
            epsilon = 1;
        else if (out.drift_minus < stable_drift && out.drift_plus > unstable_drift)
            epsilon = -1;
        out.detected = epsilon != 0;
        out.inconclusive = epsilon == 0;
    }
    out.epsilon = epsilon;
    if (epsilon == 1) {
        out.L1 = static_cast<double>(vp1);
        long double euler = std::numbers::egamma_v<long double>;
        out.L1prime = static_cast<double>(vp1 * (std::log(two_pi) + euler - std::log(rootN)));
    } else if (epsilon == -1) {
        out.L1 = 0;
        out.L1prime = static_cast<double>(2 * dprime);
    }
    return out;
}

CentralValue central_value(Curve const &curve, LSeriesConfig const &config)
{
    if (!config.conductor)
        throw domain_error("central_value: conductor required (flag or registry)");
    double N = static_cast<double>(*config.conductor);
    std::size_t cutoff = config.cutoff ? config.cutoff : default_cutoff(N);
    return central_value_from_an(an_coefficients(curve, cutoff), N, config.epsilon, cutoff);
}

mpz_class heuristic_conductor(Curve const &curve)
{
    Curve M = minimal_model(curve);
    mpz_class N = 1;
    for (auto const &[p, e] : factor(M.discriminant())) {
        (void)e;
        N *= M.c4() % p == 0 ? p * p : p;
    }
    return N;
}

std::optional<ConductorSearch> conductor_search(Curve const &curve, long long max_conductor)
{
    Curve M = minimal_model(curve);
    mpz_class odd = 1;
    std::vector<int> e2{0}, e3{0};
    for (auto const &[p, e] : factor(M.discriminant())) {
        (void)e;
        bool additive = M.c4() % p == 0;
        if (p == 2 || p == 3) {
            int hi = p == 2 ? 8 : 5;
            std::vector<int> &range = p == 2 ? e2 : e3;
            range.clear();
            if (!additive)
                range.push_back(1);
            else
                for (int k = 2; k <= hi; ++k)
                    range.push_back(k);
        } else {
            odd *= additive ? p * p : p;
        }
    }
    if (!odd.fits_slong_p() || odd > mpz_class(static_cast<long>(max_conductor)))
        return std::nullopt;
    std::vector<long long> candidates;
    for (int a : e2)
        for (int b : e3) {
            long double N = static_cast<long double>(odd.get_si()) * std::pow(2.0L, a) * std::pow(3.0L, b);
            if (N <= static_cast<long double>(max_conductor))
                candidates.push_back(static_cast<long long>(N));
        }
    if (candidates.empty())
        return std::nullopt;
    std::sort(candidates.begin(), candidates.end());
    std::size_t cutoff = default_cutoff(static_cast<double>(candidates.back()));
    std::vector<long long> an = an_coefficients(M, cutoff + 1);
    std::optional<ConductorSearch> best;
    for (long long N : candidates) {
        CentralValue v = central_value_from_an(an, static_cast<double>(N), 0);
        if (!v.detected)
            continue;
        double drift = std::min(v.drift_plus, v.drift_minus);
        if (!best || drift < best->drift)
            best = ConductorSearch{N, v.epsilon, drift, candidates.size()};
    }
    return best;
}

BsdProductTrace bsd_product(Curve const &curve, std::uint64_t xmax, unsigned jobs)
{
    if (xmax < 2)
        throw domain_error("bsd_product: empty prime range, slope undefined");
    std::vector<double> checkpoints;
    for (int j = 4;; ++j) {
        double x = std::pow(10.0, j / 8.0);
        if (x >= static_cast<double>(xmax))
            break;
        checkpoints.push_back(x);
    }
    checkpoints.push_back(static_cast<double>(xmax));
    if (checkpoints.size() < 4)
        throw domain_error("bsd_product: too few checkpoints below xmax for a slope fit");

    auto primes = primes_up_to(xmax - 1);
    std::vector<double> terms(primes.size());
    parallel_for(primes.size(), jobs, [&](std::size_t i) {
        std::uint64_t p = primes[i];
        terms[i] = std::log(static_cast<double>(count_points_fp(curve, p)) / static_cast<double>(p));
    });

    BsdProductTrace out;
    long double acc = 0;
    std::size_t i = 0;
    for (double x : checkpoints) {
        while (i < primes.size() && static_cast<double>(primes[i]) < x)
            acc += terms[i++];
        out.x.push_back(x);
        out.product.push_back(static_cast<double>(std::exp(acc)));
        out.loglog.push_back(std::log(std::log(x)));
    }

    std::size_t n = out.x.size(), lo = n / 2;
    double sx = 0, sy = 0, sxx = 0, sxy = 0, m = static_cast<double>(n - lo);
    for (std::size_t k = lo; k < n; ++k) {
        double X = out.loglog[k], Y = std::log(out.product[k]);
        sx += X;
        sy += Y;
        sxx += X * X;
        sxy += X * Y;
    }
    out.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    out.constant = std::exp((sy - out.slope * sx) / m);
    return out;
}

LeadingCoefficientReport leading_coefficient_report(Curve const &curve, LSeriesConfig const &config,
                                                    std::vector<Point> const &generators)
{
    for (auto const &P : generators)
        curve.require_on_curve(P);
    LeadingCoefficientReport out;
    out.rank = static_cast<int>(generators.size());
    auto H = height_pairing_matrix(curve, generators);
    double diag = 1;
    for (std::size_t i = 0; i < generators.size(); ++i)
        diag *= H.matrix[i][i];
    if (!generators.empty() && !(H.regulator > 1e-8 * diag))
        throw domain_error("leading_coefficient_report: generators dependent");
    out.regulator = H.regulator;
    out.torsion_order = torsion_subgroup(curve).order();
    auto L = period_lattice(curve);
    out.omega = static_cast<double>(L.w1.real());
    out.real_components = L.real_components;
    out.central = central_value(curve, config);
    if (!out.central.inconclusive) {
        if (out.rank == 0 && out.central.epsilon == 1)
            out.c0 = out.central.L1;
        else if (out.rank == 1 && out.central.epsilon == -1)
            out.c0 = out.central.L1prime;
    }
    if (out.c0) {
        double t = out.torsion_order;
        out.residual_ratio = *out.c0 * t * t / (out.regulator * out.omega);
    }
    return out;
}

} // namespace ellq
