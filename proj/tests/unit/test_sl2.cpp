#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ellq/sl2.hpp"

using namespace ellq;

namespace
{

mpq_class rational(std::mt19937_64 &rng, int bound, int max_den)
{
    std::uniform_int_distribution<int> num(-bound, bound), den(1, max_den);
    mpq_class q(num(rng), den(rng));
    q.canonicalize();
    return q;
}

LieQ rational_element(std::mt19937_64 &rng)
{
    return {rational(rng, 9, 5), rational(rng, 9, 5), rational(rng, 9, 5)};
}

// m^2 - k^2, 2mk, +-(m^2 + k^2) scaled by a random rational.
LieQ rational_cone_element(std::mt19937_64 &rng, int sign)
{
    std::uniform_int_distribution<int> small(-6, 6), den(1, 7);
    int m = small(rng), k = small(rng);
    if (m == 0 && k == 0)
        m = 1;
    mpq_class s(1 + std::abs(small(rng)), den(rng));
    s.canonicalize();
    return {s * (m * m - k * k), s * (2 * m * k), s * sign * (m * m + k * k)};
}

GroupQ rational_group(std::mt19937_64 &rng)
{
    mpq_class a = rational(rng, 7, 4);
    while (a == 0)
        a = rational(rng, 7, 4);
    mpq_class b = rational(rng, 7, 4), c = rational(rng, 7, 4);
    mpq_class d = (1 + b * c) / a;
    return {a, b, c, d};
}

GroupD random_group(std::mt19937_64 &rng)
{
    std::uniform_real_distribution<double> u(-2, 2), mag(0.3, 2);
    std::bernoulli_distribution coin(0.5);
    double a = mag(rng) * (coin(rng) ? 1 : -1), b = u(rng), c = u(rng);
    return {a, b, c, (1 + b * c) / a};
}

double max_diff(GroupD const &g, GroupD const &h)
{
    return std::max({std::fabs(g.a - h.a), std::fabs(g.b - h.b), std::fabs(g.c - h.c), std::fabs(g.d - h.d)});
}

} // namespace

TEST_CASE("basis relations in exact arithmetic")
{
    LieQ X = basis_X<mpq_class>(), Y = basis_Y<mpq_class>(), Z = basis_Z<mpq_class>();
    LieQ S = nilpotent_S<mpq_class>(), T = nilpotent_T<mpq_class>();
    CHECK(bracket(X, Y) == Z * mpq_class(2));
    CHECK(bracket(X, Z) == Y * mpq_class(2));
    CHECK(bracket(Y, Z) == X * mpq_class(-2));
    auto sq = [](LieQ const &f) { return mat_mul(f.matrix(), f.matrix()); };
    auto x2 = sq(X), y2 = sq(Y), z2 = sq(Z);
    std::array<mpq_class, 4> sum;
    for (int i = 0; i < 4; ++i)
        sum[i] = x2[i] + y2[i] - z2[i];
    CHECK(sum == std::array<mpq_class, 4>{3, 0, 0, 3});
    CHECK(S.matrix() == std::array<mpq_class, 4>{0, 1, 0, 0});
    CHECK(T.matrix() == std::array<mpq_class, 4>{0, 0, 1, 0});
    CHECK(ks_triple_check(X, S, T));
    CHECK(ks_triple_check(-X, -T, -S));
    CHECK(!ks_triple_check(-X, -S, -T));
    CHECK(!ks_triple_check(X, T, S));
    CHECK(cartan(X) == -X);
    CHECK(cartan(S) == -T);
    CHECK(cartan(T) == -S);

    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
        LieQ f = rational_element(rng);
        auto m = sq(f);
        mpq_class d = f.delta();
        CHECK(m == std::array<mpq_class, 4>{d, 0, 0, d});
        CHECK(cartan(cartan(f)) == f);
    }
}

TEST_CASE("classification")
{
    CHECK(classify(basis_X<double>()).tag == OrbitTag::hyperbolic);
    CHECK(classify(basis_X<double>()).delta == 1);
    CHECK(classify(basis_Y<double>()).tag == OrbitTag::hyperbolic);
    CHECK(classify(basis_Z<double>()).tag == OrbitTag::elliptic);
    CHECK(classify(basis_Z<double>()).delta == -1);
    CHECK(classify(nilpotent_S<double>()).tag == OrbitTag::nilpotent_plus);
    CHECK(classify(nilpotent_T<double>()).tag == OrbitTag::nilpotent_minus);
    CHECK(classify(LieD{}).tag == OrbitTag::zero);
    CHECK(classify(LieD{0.3, 0.4, 0.5 + 1e-15}).tag == OrbitTag::elliptic);
    CHECK(classify(LieD{0.3, 0.4, 0.5 + 1e-15}, 1e-12).tag == OrbitTag::nilpotent_plus);
}

TEST_CASE("classification is conjugation invariant")
{
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> kind(0, 2);
    for (int i = 0; i < 500; ++i) {
        GroupQ g = rational_group(rng);
        CHECK(g.det() == 1);
        int k = kind(rng);
        LieQ f = k == 0 ? rational_element(rng) : rational_cone_element(rng, k == 1 ? 1 : -1);
        LieQ h = conjugate(g, f);
        CHECK(h.delta() == f.delta());
        CHECK(classify(h).tag == classify(f).tag);
    }
    for (int i = 0; i < 100; ++i) {
        GroupQ g = rational_group(rng);
        CHECK(classify(conjugate(g, nilpotent_S<mpq_class>())).tag == OrbitTag::nilpotent_plus);
        CHECK(classify(conjugate(g, nilpotent_T<mpq_class>())).tag == OrbitTag::nilpotent_minus);
    }
    GroupD id;
    LieD f{0.25, -1.5, 2};
    CHECK(conjugate(id, f) == f);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int i = 0; i < 200; ++i) {
        LieD a{u(rng), u(rng), u(rng)};
        LieD b = conjugate(random_group(rng), a);
        CHECK(std::fabs(b.delta() - a.delta()) < 1e-10 * (1 + std::fabs(b.x) + std::fabs(b.y) + std::fabs(b.z)) *
                                                      (1 + std::fabs(b.x) + std::fabs(b.y) + std::fabs(b.z)));
    }
}

TEST_CASE("exponential map")
{
    GroupD e = exp_map(LieD{});
    CHECK(max_diff(e, GroupD{}) == 0);
    GroupD s = exp_map(nilpotent_S<double>());
    CHECK(max_diff(s, GroupD{1, 1, 0, 1}) == 0);
    GroupD r = exp_map(basis_Z<double>() * (std::numbers::pi / 2));
    CHECK(max_diff(r, GroupD{0, 1, -1, 0}) < 1e-12);
    CHECK(max_diff(r, exp_series(basis_Z<double>() * (std::numbers::pi / 2))) < 1e-12);

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.7, 1.7);
    for (int i = 0; i < 500; ++i) {
        LieD f{u(rng), u(rng), u(rng)};
        if (std::sqrt(f.x * f.x + f.y * f.y + f.z * f.z) > 3)
            continue;
        GroupD g = exp_map(f);
        CHECK(max_diff(g, exp_series(f)) < 1e-10);
        CHECK(std::fabs(g.det() - 1) < 1e-12 * std::max(1.0, g.a * g.d));
        auto m = mat_mul(f.matrix(), f.matrix());
        double d = f.delta();
        CHECK(std::fabs(m[0] - d) < 1e-12 * (1 + m[0] * m[0]));
        CHECK(std::fabs(m[1]) < 1e-12);
        CHECK(std::fabs(m[2]) < 1e-12);
    }
}

TEST_CASE("mobius and omega")
{
    CHECK(omega(LieD{}) == cplxd(0, 1));
    CHECK(std::abs(omega(nilpotent_S<double>()) - cplxd(1, 1)) < 1e-15);
    std::mt19937_64 rng(5);
    for (int i = 0; i < 100; ++i) {
        GroupD g = random_group(rng);
        cplxd tau = mobius(g, cplxd(0, 1));
        cplxd direct = cplxd(g.b, g.a) / cplxd(g.d, g.c);
        CHECK(std::abs(tau - direct) < 1e-12 * (1 + std::abs(direct)));
        CHECK(tau.imag() == doctest::Approx(1 / (g.c * g.c + g.d * g.d)).epsilon(1e-12));
        CHECK(tau.imag() > 0);
    }
    CHECK_THROWS_AS(mobius(GroupD{}, cplxd(0, -1)), domain_error);
}

TEST_CASE("omega inverse on the nilpotent cone")
{
    auto id = omega_inverse_nilpotent(cplxd(0, 1));
    CHECK(id.element == LieD{});
    auto s = omega_inverse_nilpotent(cplxd(1, 1));
    CHECK(std::fabs(s.element.x) < 1e-15);
    CHECK(std::fabs(s.element.y - 0.5) < 1e-15);
    CHECK(std::fabs(s.element.z - 0.5) < 1e-15);

    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> re(-2, 2), im(0.1, 5);
    for (int i = 0; i < 1000; ++i) {
        cplxd tau(re(rng), im(rng));
        auto inv = omega_inverse_nilpotent(tau);
        CHECK(inv.residual < 1e-9);
        CHECK(std::abs(omega(inv.element) - tau) < 1e-9);
        CHECK(std::fabs(inv.element.delta()) < 1e-12 * (1 + inv.element.z * inv.element.z));
        auto other = omega_inverse_nilpotent(tau, -inv.branch);
        CHECK(other.residual < 1e-9);
        CHECK(std::fabs(inv.element.x) <= std::fabs(other.element.x));
    }
    CHECK_THROWS_AS(omega_inverse_nilpotent(cplxd(1, 0)), domain_error);
}

TEST_CASE("cone sets through an anchor")
{
    cplxd tau(0.5, std::sqrt(3.0) / 2);
    auto sets = cone_sets_at(tau);
    LieD F = sets[0].anchor;
    CHECK(F.z != 0);
    CHECK(std::abs(omega(F) - tau) < 1e-9);
    for (auto const &set : sets) {
        auto at = set.point(set.anchor_parameter, set.anchor_sheet);
        CHECK(std::fabs(at.x - F.x) < 1e-12);
        CHECK(std::fabs(at.y - F.y) < 1e-12);
        CHECK(std::fabs(at.z - F.z) < 1e-12);
        auto samples = image_sample(set, 50, 42);
        REQUIRE(samples.size() == 50);
        CHECK(samples[0].image == omega(F));
        for (auto const &p : samples) {
            CHECK(p.image.imag() > 0);
            CHECK(std::fabs(p.delta) < 1e-12 * (1 + p.element.z * p.element.z));
            if (set.kind == ConeKind::C)
                CHECK(p.element.z == F.z);
            if (set.kind == ConeKind::D)
                CHECK(p.element.y == F.y);
            if (set.kind == ConeKind::E)
                CHECK(p.element.x == F.x);
        }
        auto again = image_sample(set, 50, 42);
        CHECK(again.back().image == samples.back().image);
    }
    CHECK_THROWS_AS(cone_sets_at(cplxd(0, 1)), domain_error);
}

TEST_CASE("cone sampler and K-orbits")
{
    auto plus = sample_cone(200, 9, 1);
    for (auto const &p : plus) {
        CHECK(classify(p.element, 1e-12).tag == OrbitTag::nilpotent_plus);
        CHECK(p.image.imag() > 0);
    }
    auto minus = sample_cone(50, 9, -1);
    for (auto const &p : minus)
        CHECK(classify(p.element, 1e-12).tag == OrbitTag::nilpotent_minus);

    cplxd tau(0.5, std::sqrt(7.0) / 2);
    auto orbit = k_orbit(tau, {0.0, 0.3, 1.1});
    CHECK(orbit[0] == tau);
    for (auto const &p : k_orbit(cplxd(0, 1), {0.0, 0.4, 2.0, -1.3}))
        CHECK(std::abs(p - cplxd(0, 1)) < 1e-15);
}
