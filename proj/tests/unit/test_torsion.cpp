#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "ellq/numtheory.hpp"
#include "ellq/torsion.hpp"

using namespace ellq;

namespace
{

bool contains(std::vector<Point> const &v, Point const &p) { return std::find(v.begin(), v.end(), p) != v.end(); }

// every rational point with |num|, den <= bound on x, order-filtered
std::size_t brute_force_torsion(Curve const &E, int bound)
{
    std::set<std::string> found{"inf"};
    for (int den = 1; den <= bound; ++den) {
        for (int num = -bound; num <= bound; ++num) {
            mpq_class x(num, den);
            x.canonicalize();
            if (x.get_den() != den)
                continue;
            // y^2 + (a1 x + a3) y - rhs = 0
            mpq_class b = E.a1() * x + E.a3();
            mpq_class rhs = ((x + E.a2()) * x + E.a4()) * x + E.a6();
            mpq_class disc = b * b + 4 * rhs;
            if (disc < 0)
                continue;
            mpz_class rn, rd;
            if (!is_square(disc.get_num(), &rn) || !is_square(disc.get_den(), &rd))
                continue;
            mpq_class r(rn, rd);
            for (int s : {1, -1}) {
                Point P(x, (-b + s * r) / 2);
                if (torsion_order(E, P) > 0)
                    found.insert(P.to_string());
            }
        }
    }
    return found.size();
}

} // namespace

TEST_CASE("Lutz-Nagell candidates")
{
    auto c = lutz_nagell_candidates(Curve(0, 0, 0, -1, 0));
    CHECK(contains(c, Point(0, 0)));
    CHECK(contains(c, Point(1, 0)));
    CHECK(contains(c, Point(-1, 0)));

    c = lutz_nagell_candidates(Curve(0, 0, 0, 0, 1));
    for (auto const &p : {Point(2, 3), Point(2, -3), Point(0, 1), Point(0, -1), Point(-1, 0)})
        CHECK(contains(c, p));

    c = lutz_nagell_candidates(Curve(0, 0, 0, 0, 2));
    for (auto const &p : c)
        CHECK(torsion_order(Curve(0, 0, 0, 0, 2), p) == 0);

    CHECK_THROWS_AS(lutz_nagell_candidates(Curve(0, 0, 1, -1, 0)), domain_error);
}

TEST_CASE("torsion subgroups")
{
    auto G = torsion_subgroup(Curve(0, 0, 0, -1, 0));
    CHECK(to_string(G.structure) == "Z/2Z x Z/2Z");
    CHECK(G.order() == 4);
    G = torsion_subgroup(Curve(0, 0, 0, 0, 1));
    CHECK(to_string(G.structure) == "Z/6Z");
    REQUIRE(G.generators.size() == 1);
    CHECK(torsion_order(Curve(0, 0, 0, 0, 1), G.generators[0]) == 6);
    G = torsion_subgroup(Curve(0, 0, 0, 4, 0));
    CHECK(to_string(G.structure) == "Z/4Z");
    G = torsion_subgroup(Curve(0, 0, 0, 0, 2));
    CHECK(to_string(G.structure) == "Z/1Z");
    G = torsion_subgroup(Curve(0, -1, 1, -10, -20));
    CHECK(to_string(G.structure) == "Z/5Z");
    G = torsion_subgroup(Curve(1, 0, 1, -19, 26));
    CHECK(to_string(G.structure) == "Z/2Z x Z/6Z");
    for (auto const &g : G.generators)
        CHECK(G.order() % torsion_order(Curve(1, 0, 1, -19, 26), g) == 0);
}

TEST_CASE("Mazur list")
{
    CHECK(mazur_check({1, 7}));
    CHECK_FALSE(mazur_check({1, 11}));
    CHECK(mazur_check({2, 8}));
    CHECK(mazur_check({1, 12}));
    CHECK_FALSE(mazur_check({2, 10}));
    int count = 0;
    for (int m = 1; m <= 4; ++m)
        for (int n = 1; n <= 20; ++n)
            count += mazur_check({m, n}) ? 1 : 0;
    CHECK(count == 15);
}

TEST_CASE("torsion agrees with bounded brute force")
{
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> c(-12, 12);
    int done = 0;
    while (done < 50) {
        try {
            Curve E(0, 0, 0, c(rng), c(rng));
            auto G = torsion_subgroup(E);
            CHECK(static_cast<std::size_t>(G.order()) == brute_force_torsion(E, 50));
            ++done;
        } catch (domain_error const &) {
        }
    }
}
