#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <set>
#include <tuple>

#include "ellq/heegner.hpp"
#include "ellq/heights.hpp"
#include "ellq/local_data.hpp"
#include "ellq/numtheory.hpp"

using namespace ellq;

namespace
{

Curve curve37() { return Curve(0, 0, 1, -1, 0); }

std::size_t brute_force_classes(long long D)
{
    std::set<std::tuple<long long, long long, long long>> classes;
    long long bound = -D;
    for (long long a = 1; a <= bound; ++a)
        for (long long b = -2 * a; b <= 2 * a; ++b) {
            long long num = b * b - D;
            if (num % (4 * a) != 0)
                continue;
            long long c = num / (4 * a);
            if (std::gcd(std::gcd(a, std::llabs(b)), c) != 1)
                continue;
            QuadraticForm r = reduce({a, b, c});
            classes.insert({r.a, r.b, r.c});
        }
    return classes.size();
}

} // namespace

TEST_CASE("reduced forms and class numbers")
{
    CHECK(reduced_forms(-4) == std::vector<QuadraticForm>{{1, 0, 1}});
    CHECK(reduced_forms(-3) == std::vector<QuadraticForm>{{1, 1, 1}});
    auto f23 = reduced_forms(-23);
    CHECK(f23.size() == 3);
    CHECK(f23[0] == QuadraticForm{1, 1, 6});
    for (auto [D, h] : std::vector<std::pair<long long, int>>{{-7, 1},
                                                              {-8, 1},
                                                              {-11, 1},
                                                              {-15, 2},
                                                              {-20, 2},
                                                              {-23, 3},
                                                              {-39, 4},
                                                              {-47, 5},
                                                              {-71, 7},
                                                              {-84, 4},
                                                              {-163, 1}})
        CHECK(class_number(D) == h);
    for (long long D = -3; D >= -200; --D) {
        long long m = ((D % 4) + 4) % 4;
        if (m == 2 || m == 3)
            continue;
        CHECK(brute_force_classes(D) == reduced_forms(D).size());
    }
    for (auto const &f : reduced_forms(-191)) {
        CHECK(reduce(f) == f);
        CHECK(f.discriminant() == -191);
    }
    CHECK_THROWS_AS(reduced_forms(-5), domain_error);
    CHECK_THROWS_AS(reduced_forms(8), domain_error);
    CHECK(half_unit_count(-3) == 3);
    CHECK(half_unit_count(-4) == 2);
    CHECK(half_unit_count(-7) == 1);
}

TEST_CASE("theta orbit representatives")
{
    auto s = theta_orbit_reps(1, -4, 0);
    REQUIRE(s.forms.size() == 1);
    CHECK(std::abs(s.points[0] - cplx(0, 1)) < 1e-15L);

    auto t = theta_orbit_reps(37, -7, 17);
    REQUIRE(t.forms.size() == 1);
    CHECK(t.forms[0].a % 37 == 0);
    CHECK(((t.forms[0].b - 17) % 74 + 74) % 74 == 0);

    for (long long D : {-47L, -71L, -83L, -107L, -139L}) {
        auto r = heegner_residue(37, D);
        if (!r)
            continue;
        auto sys = theta_orbit_reps(37, D, *r);
        CHECK(sys.class_number() == class_number(D));
        std::set<std::tuple<long long, long long, long long>> seen;
        for (auto const &f : sys.forms) {
            CHECK(f.a % 37 == 0);
            CHECK(((f.b - *r) % 74 + 74) % 74 == 0);
            CHECK(f.discriminant() == D);
            auto red = reduce(f);
            CHECK(seen.insert({red.a, red.b, red.c}).second);
        }
    }
    CHECK_THROWS_AS(theta_orbit_reps(37, -7, 16), domain_error);
    CHECK_THROWS_AS(theta_orbit_reps(7, -7, 0), domain_error);
    CHECK(heegner_residue(37, -7) == 17);
    CHECK(!heegner_residue(37, -8));
}

TEST_CASE("modular parametrization sum")
{
    auto an = an_coefficients(curve37(), 400);
    cplx z(0.123L, 0.3L);
    auto a = modular_sum(an, z, 300), b = modular_sum(an, z + cplx(1, 0), 300);
    CHECK(std::abs(a.w - b.w) < 1e-14L);
    auto c = modular_sum(an, z, 150);
    CHECK(std::abs(a.w - c.w) <= c.tail);
    CHECK(a.tail < c.tail);
    auto far = modular_sum(an, cplx(0.2L, 5), 50);
    cplx q = std::exp(cplx(0, 2 * std::numbers::pi_v<long double>) * cplx(0.2L, 5));
    CHECK(std::abs(far.w - q) < 1e-12L * std::abs(q));
    CHECK_THROWS_AS(modular_sum(an, cplx(0, -1), 10), domain_error);
    CHECK_THROWS_AS(modular_param(curve37(), period_lattice(curve37()), an, cplx(0, 0.01L), 300), domain_error);
}

TEST_CASE("Heegner points on 37a1")
{
    Curve E = curve37();
    auto h = heegner_point(E, 37, -7, 17);
    REQUIRE(h.snapped);
    CHECK(E.contains(*h.snapped));
    CHECK(!h.torsion);
    CHECK(h.height == doctest::Approx(canonical_height(E, Point(0, 0))).epsilon(1e-9));
    auto doubled = heegner_point(E, 37, -7, 17, 400);
    REQUIRE(doubled.snapped);
    CHECK(*doubled.snapped == *h.snapped);
    auto g = heegner_point(E, 37, -67, 9);
    REQUIRE(g.snapped);
    CHECK(E.contains(*g.snapped));
}

TEST_CASE("snap point")
{
    Curve E = curve37();
    CHECK(*snap_point(E, ComplexPoint{false, cplx(1e-12L, 1e-13L), cplx(-1e-12L, 0)}) == Point(0, 0));
    CHECK(!snap_point(E, ComplexPoint{false, cplx(0.5L, 0.2L), cplx(0, 0)}));
    CHECK(!snap_point(E, ComplexPoint{false, cplx(0.5L, 0), cplx(0, 0)}));
    CHECK(snap_point(E, ComplexPoint{true, 0, 0})->is_infinity());
}

TEST_CASE("quadratic twists")
{
    Curve E = curve37();
    CHECK(twist(E, 1) == E);
    CHECK_THROWS_AS(twist(E, 0), domain_error);
    Curve F(0, 1, 0, 2, 0);
    CHECK(twist(F, -1).j_invariant() == F.j_invariant());
    for (long long D : {-7LL, -11LL, 5LL, -139LL}) {
        Curve T = twist(E, D);
        CHECK(T.j_invariant() == E.j_invariant());
        for (std::uint64_t p : primes_up_to(100)) {
            if (p < 5 || !is_good_prime(E, p) || D % static_cast<long long>(p) == 0)
                continue;
            CHECK(reduction_type(T, p).ap == kronecker(D, static_cast<long long>(p)) * reduction_type(E, p).ap);
        }
    }
}

TEST_CASE("Gross-Zagier ratio test")
{
    Curve E = curve37();
    auto same = gross_zagier_ratio_test(E, 37, -1, -7, 17, -7, 17);
    CHECK(!same.vacuous);
    CHECK(same.discrepancy < 1e-14);
    auto r = gross_zagier_ratio_test(E, 37, -1, -7, 17, -11, 27);
    CHECK(!r.vacuous);
    CHECK(r.discrepancy < 0.05);
    CHECK(r.collinearity < 1e-8);
    CHECK(r.first.twisted_L1 > 0);
    GrossZagierOptions opts;
    opts.height_scale = 2;
    auto scaled = gross_zagier_ratio_test(E, 37, -1, -7, 17, -11, 27, opts);
    CHECK(scaled.discrepancy == doctest::Approx(r.discrepancy).epsilon(1e-6));
    CHECK(scaled.collinearity < 1e-8);
    auto units = gross_zagier_ratio_test(E, 37, -1, -3, 21, -7, 17);
    CHECK(units.first.u == 3);
    CHECK(units.discrepancy < 1e-6);
    CHECK_THROWS_AS(gross_zagier_ratio_test(E, 37, 1, -7, 17, -11, 27), domain_error);
    CHECK_THROWS_AS(gross_zagier_ratio_test(E, 37, -1, -4, 0, -7, 17), domain_error);
}
