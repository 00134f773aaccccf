#include <doctest.h>

#include <cmath>

#include "ellq/l_series.hpp"
#include "ellq/local_data.hpp"
#include "ellq/numtheory.hpp"

using namespace ellq;

TEST_CASE("dirichlet partial sums")
{
    Curve E(0, 0, 0, -1, 0);
    CHECK(dirichlet_partial(E, {2.0, 0.0}, 1).value == std::complex<double>(1, 0));
    CHECK(dirichlet_partial(Curve(0, 1, 1, -2, 0), {1.7, 3.0}, 1).value == std::complex<double>(1, 0));
    auto a = dirichlet_partial(E, {2.0, 0.0}, 1000), b = dirichlet_partial(E, {2.0, 0.0}, 10000);
    CHECK(std::abs(a.value - b.value) < a.tail_bound);
    CHECK(a.tail_bound > b.tail_bound);
    CHECK_THROWS_AS(dirichlet_partial(E, {1.5, 0.0}, 10), domain_error);
    CHECK_THROWS_AS(dirichlet_partial(E, {1.0, 0.0}, 10), domain_error);
}

TEST_CASE("Euler product at s = 2 against the smooth part of the Dirichlet series")
{
    Curve E(0, 0, 1, -1, 0);
    std::size_t limit = 2000000;
    auto an = an_coefficients(E, limit);
    auto spf = smallest_prime_factors(limit);
    long double euler = 1;
    for (std::uint64_t p : primes_up_to(100)) {
        auto d = reduction_type(E, p);
        long double x = 1.0L / (static_cast<long double>(p) * p);
        long double local = 1 - d.ap * x + (d.kind == Reduction::good ? static_cast<long double>(p) * x * x : 0);
        euler /= local;
    }
    long double smooth = 0, tail = 0;
    for (std::size_t n = 1; n <= limit; ++n) {
        std::size_t m = n, largest = 1;
        while (m > 1) {
            largest = std::max<std::size_t>(largest, spf[m]);
            m /= spf[m];
        }
        if (largest <= 100) {
            long double term = static_cast<long double>(an[n]) / (static_cast<long double>(n) * n);
            smooth += term;
            if (n > limit / 2)
                tail += std::fabs(term);
        }
    }
    CHECK(std::fabs(euler - smooth) < 1e-6);
    CHECK(tail < 1e-4);
}

TEST_CASE("central values")
{
    Curve E(0, 0, 0, 4, 0);
    LSeriesConfig cfg;
    cfg.conductor = 32;
    auto v = central_value(E, cfg);
    CHECK(v.epsilon == 1);
    CHECK(v.detected);
    CHECK(v.L1 > 0.5);
    cfg.cutoff = 2 * v.cutoff;
    CHECK(std::fabs(central_value(E, cfg).L1 - v.L1) < 1e-6);

    for (auto const &[F, N] : {std::pair{Curve(0, -1, 1, -10, -20), 11LL}, std::pair{Curve(0, 0, 0, 0, 1), 36LL},
                               std::pair{Curve(0, 0, 0, 1, 0), 64LL}}) {
        LSeriesConfig c;
        c.conductor = N;
        c.cutoff = static_cast<std::size_t>(20 * std::sqrt(static_cast<double>(N))) + 1;
        double a = central_value(F, c).L1;
        c.cutoff *= 2;
        CHECK(std::fabs(central_value(F, c).L1 - a) < 1e-8);
    }

    LSeriesConfig c37;
    c37.conductor = 37;
    auto w = central_value(Curve(0, 0, 1, -1, 0), c37);
    CHECK(w.epsilon == -1);
    CHECK(w.L1 == 0.0);
    CHECK(w.L1prime == doctest::Approx(0.305999773834052).epsilon(1e-10));
    c37.epsilon = -1;
    CHECK(central_value(Curve(0, 0, 1, -1, 0), c37).L1 == 0.0);

    LSeriesConfig c11;
    c11.conductor = 11;
    CHECK(central_value(Curve(0, -1, 1, -10, -20), c11).L1 == doctest::Approx(0.253841860855911).epsilon(1e-10));
}

TEST_CASE("central value needs a conductor and flags a wrong one")
{
    LSeriesConfig cfg;
    CHECK_THROWS_AS(central_value(Curve(0, 0, 1, -1, 0), cfg), domain_error);
    cfg.conductor = 38;
    auto v = central_value(Curve(0, 0, 1, -1, 0), cfg);
    CHECK(v.inconclusive);
    CHECK(v.epsilon == 0);
}

TEST_CASE("heuristic conductor")
{
    CHECK(heuristic_conductor(Curve(0, 0, 1, -1, 0)) == 37);
    CHECK(heuristic_conductor(Curve(0, 1, 1, -2, 0)) == 389);
    CHECK(heuristic_conductor(Curve(0, -1, 1, -10, -20)) == 11);
}

TEST_CASE("bsd product trace")
{
    CHECK_THROWS_AS(bsd_product(Curve(0, 0, 0, 4, 0), 1), domain_error);
    auto t = bsd_product(Curve(0, 0, 0, 4, 0), 20000);
    for (std::size_t i = 1; i < t.x.size(); ++i)
        CHECK(t.x[i] > t.x[i - 1]);
    for (double p : t.product)
        CHECK(p > 0);
    CHECK(t.x.back() == 20000.0);
    auto u = bsd_product(Curve(0, 0, 0, 4, 0), 20000, 3);
    CHECK(u.slope == t.slope);
    CHECK(u.product == t.product);
}

TEST_CASE("bsd slope is stable under rescaling the model")
{
    Curve E(0, 0, 1, -1, 0);
    ShortModel m = integral_short_model(E);
    Curve F(0, 0, 0, m.curve.a4() * 625, m.curve.a6() * 15625);
    auto a = bsd_product(E, 100000), b = bsd_product(F, 100000);
    CHECK(std::fabs(a.slope - b.slope) < 0.1);
}

TEST_CASE("leading coefficient ingredients")
{
    LSeriesConfig cfg;
    cfg.conductor = 956;
    auto r = leading_coefficient_report(Curve(0, 0, 0, -1, -3), cfg, {});
    CHECK(r.rank == 0);
    CHECK(r.regulator == 1.0);
    CHECK(r.torsion_order == 1);
    REQUIRE(r.residual_ratio);
    CHECK(*r.residual_ratio > 0);

    LSeriesConfig c32;
    c32.conductor = 32;
    auto s = leading_coefficient_report(Curve(0, 0, 0, -1, 0), c32, {});
    CHECK(s.torsion_order == 4);
    CHECK(s.omega == doctest::Approx(2.62205755429212).epsilon(1e-10));
    REQUIRE(s.residual_ratio);
    CHECK(*s.residual_ratio > 0);

    LSeriesConfig c37;
    c37.conductor = 37;
    auto t = leading_coefficient_report(Curve(0, 0, 1, -1, 0), c37, {Point(0, 0)});
    CHECK(t.rank == 1);
    REQUIRE(t.c0);
    CHECK(*t.c0 == doctest::Approx(0.305999773834052).epsilon(1e-9));

    Curve E(0, 1, 1, -2, 0);
    CHECK_THROWS_AS(leading_coefficient_report(E, cfg, {Point(0, 0), mul(E, 2, Point(0, 0))}), domain_error);
}

TEST_CASE("conductor search")
{
    struct Known
    {
        Curve E;
        long long N;
        int eps;
    };
    for (auto const &k : {Known{Curve(0, -1, 1, -10, -20), 11, 1}, Known{Curve(0, 0, 0, 4, 0), 32, 1},
                          Known{Curve(0, 0, 0, 0, 1), 36, 1}, Known{Curve(0, 0, 0, 1, 0), 64, 1},
                          Known{Curve(0, 0, 0, 0, -2), 1728, -1}, Known{Curve(0, 0, 1, -1, 0), 37, -1},
                          Known{Curve(0, 0, 0, -35, -98), 49, 1}, Known{Curve(0, 0, 0, -11, 14), 32, 1}}) {
        CAPTURE(k.E.to_string());
        auto s = conductor_search(k.E);
        REQUIRE(s);
        CHECK(s->N == k.N);
        CHECK(s->epsilon == k.eps);
    }
    CHECK(!conductor_search(Curve(0, 0, 1, -1, 0), 36));
}
