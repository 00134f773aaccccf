#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "ellq/local_data.hpp"
#include "ellq/numtheory.hpp"

using namespace ellq;

namespace
{

std::vector<Curve> random_curves(int n, unsigned seed, int range = 20)
{
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> c(-range, range);
    std::vector<Curve> out;
    while (static_cast<int>(out.size()) < n) {
        try {
            out.emplace_back(0, 0, 0, c(rng), c(rng));
        } catch (domain_error const &) {
        }
    }
    return out;
}

} // namespace

TEST_CASE("point counts")
{
    Curve E(0, 0, 0, -1, 0);
    CHECK(count_points_fp(E, 5) == 8);
    CHECK(count_points_fp(E, 3) == 4);
    CHECK(count_points_fp(Curve(0, 0, 0, 0, 1), 5) == 6);
}

TEST_CASE("reduction types")
{
    auto d = reduction_type(Curve(0, 0, 0, -1, 0), 2);
    CHECK(d.kind == Reduction::additive);
    CHECK(d.ap == 0);
    CHECK(d.smooth_count == 2);
    d = reduction_type(Curve(0, 0, 0, 0, 1), 3);
    CHECK(d.kind == Reduction::additive);
    CHECK(d.ap == 0);
    d = reduction_type(Curve(0, 0, 0, -1, 6), 11);
    CHECK(d.kind == Reduction::split);
    CHECK(d.ap == 1);
    CHECK(d.smooth_count == 10);
    d = reduction_type(Curve(0, 0, 1, -1, 0), 37);
    CHECK(d.kind != Reduction::good);
    CHECK(d.kind != Reduction::additive);
}

TEST_CASE("a_n recursions")
{
    Curve E(0, 0, 1, -1, 0);
    auto an = an_coefficients(E, 2000);
    CHECK(an[1] == 1);
    CHECK(an[2] == -2);
    CHECK(an[3] == -3);
    CHECK(an[6] == an[2] * an[3]);
    for (std::uint64_t p : primes_up_to(40)) {
        if (p == 37)
            continue;
        if (an[p] == -1)
            CHECK(an[p * p] == 1 - static_cast<long long>(p));
        CHECK(an[p * p] == an[p] * an[p] - static_cast<long long>(p));
    }
    CHECK(an[37] == reduction_type(E, 37).ap);
    CHECK(an[37 * 37] == an[37] * an[37]);

    auto F = Curve(0, 0, 0, -1, 6);
    auto bn = an_coefficients(F, 1400);
    CHECK(bn[11] == 1);
    CHECK(bn[1331] == 1);
}

TEST_CASE("Hasse bound on random curves")
{
    int violations = 0;
    for (auto const &E : random_curves(100, 3)) {
        for (auto const &d : local_data_up_to(E, 1000)) {
            if (d.kind == Reduction::good && static_cast<double>(d.ap * d.ap) >= 4.0 * static_cast<double>(d.p))
                ++violations;
        }
    }
    CHECK(violations == 0);
}

TEST_CASE("character sum equals naive count")
{
    auto curves = random_curves(18, 5);
    curves.emplace_back(1, -1, 1, 0, 0);
    curves.emplace_back(0, 1, 1, -2, 0);
    for (auto const &E : curves)
        for (std::uint64_t p : primes_up_to(199))
            CHECK(count_points_charsum(E, p) == count_points_naive(E, p));
}

TEST_CASE("baby-step giant-step agrees with the character sum")
{
    std::vector<Curve> curves{Curve(0, 0, 1, -1, 0), Curve(0, 1, 1, -2, 0), Curve(1, -1, 1, 0, 0),
                              Curve(0, 0, 0, 4, 0), Curve(0, 0, 0, 0, -2)};
    for (auto const &E : curves) {
        for (std::uint64_t p : primes_up_to(6000)) {
            if (p < 1000 || !is_good_prime(E, p))
                continue;
            CHECK(count_points_bsgs(E, p) == count_points_charsum(E, p));
        }
    }
}

TEST_CASE("a_p is invariant under rescaling the model")
{
    Curve E(0, 0, 0, -7, 10);
    mpz_class u = 3;
    Curve F(0, 0, 0, E.a4() * u * u * u * u, E.a6() * u * u * u * u * u * u);
    for (std::uint64_t p : primes_up_to(300)) {
        if (p == 3 || !is_good_prime(E, p))
            continue;
        CHECK(reduction_type(E, p).ap == reduction_type(F, p).ap);
    }
}

TEST_CASE("Euler product over p <= 100 matches a_n on smooth indices")
{
    Curve E(0, 1, 1, -2, 0);
    std::size_t limit = 5000;
    auto an = an_coefficients(E, limit);
    std::vector<long long> series(limit + 1, 0);
    series[1] = 1;
    for (std::uint64_t p : primes_up_to(100)) {
        auto d = reduction_type(E, p);
        // coefficients of the local factor inverse as a power series in p^{-s}
        std::vector<long long> local{1};
        std::vector<std::size_t> powers{1};
        for (std::size_t q = p; q <= limit; q *= p) {
            std::size_t k = local.size();
            long long next = d.ap * local[k - 1];
            if (d.kind == Reduction::good && k >= 2)
                next -= static_cast<long long>(p) * local[k - 2];
            local.push_back(next);
            powers.push_back(q);
        }
        std::vector<long long> out(limit + 1, 0);
        for (std::size_t n = 1; n <= limit; ++n) {
            if (series[n] == 0)
                continue;
            for (std::size_t k = 0; k < local.size() && n * powers[k] <= limit; ++k)
                out[n * powers[k]] += series[n] * local[k];
        }
        series = out;
    }
    auto spf = smallest_prime_factors(limit);
    for (std::size_t n = 1; n <= limit; ++n) {
        std::size_t m = n, largest = 1;
        while (m > 1) {
            largest = std::max<std::size_t>(largest, spf[m]);
            m /= spf[m];
        }
        if (largest <= 100)
            CHECK(series[n] == an[n]);
    }
}
