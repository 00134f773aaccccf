#include "ellq/torsion.hpp"

#include <algorithm>
#include <numeric>

#include "ellq/local_data.hpp"
#include "ellq/numtheory.hpp"

namespace ellq
{

std::string to_string(TorsionStructure const &s)
{
    if (s.m == 1)
        return "Z/" + std::to_string(s.n) + "Z";
    return "Z/" + std::to_string(s.m) + "Z x Z/" + std::to_string(s.n) + "Z";
}

bool mazur_check(TorsionStructure const &s)
{
    if (s.m == 1)
        return (s.n >= 1 && s.n <= 10) || s.n == 12;
    if (s.m == 2)
        return s.n % 2 == 0 && s.n / 2 >= 1 && s.n / 2 <= 4;
    return false;
}

namespace
{

mpz_class eval_cubic(mpz_class const &A, mpz_class const &C, mpz_class const &x) { return (x * x + A) * x + C; }

// smallest x in [lo, hi] with sign * f(x) >= 0 for f monotone in the given direction
void monotone_root(mpz_class const &A, mpz_class const &C, mpz_class lo, mpz_class hi, int sign,
                   std::vector<mpz_class> &out)
{
    if (lo > hi)
        return;
    if (sign * sgn(eval_cubic(A, C, hi)) < 0)
        return;
    while (lo < hi) {
        mpz_class mid = lo + (hi - lo) / 2;
        if (sign * sgn(eval_cubic(A, C, mid)) >= 0)
            hi = mid;
        else
            lo = mid + 1;
    }
    if (eval_cubic(A, C, lo) == 0)
        out.push_back(lo);
}

} // namespace

std::vector<mpz_class> integer_roots_depressed_cubic(mpz_class const &A, mpz_class const &C)
{
    std::vector<mpz_class> roots;
    mpz_class R = 1 + std::max(mpz_class(abs(A)), mpz_class(abs(C)));
    if (A >= 0) {
        monotone_root(A, C, -R, R, 1, roots);
    } else {
        mpz_class t = isqrt(mpz_class(-A / 3));
        while (3 * (t + 1) * (t + 1) <= -A)
            ++t;
        monotone_root(A, C, -R, -t - 1, 1, roots);
        monotone_root(A, C, -t, t, -1, roots);
        monotone_root(A, C, t + 1, R, 1, roots);
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    return roots;
}

std::vector<Point> lutz_nagell_candidates(Curve const &S)
{
    if (!S.is_short())
        throw domain_error("Lutz-Nagell candidates need an integral model y^2 = x^3 + Ax + B");
    mpz_class const &A = S.a4(), &B = S.a6();
    mpz_class D = 4 * A * A * A + 27 * B * B;
    std::vector<Point> out;
    for (auto const &x : integer_roots_depressed_cubic(A, B))
        out.emplace_back(mpq_class(x), mpq_class(0));
    mpz_class s = square_part_root(D);
    for (auto const &y : positive_divisors(factor(s))) {
        for (auto const &x : integer_roots_depressed_cubic(A, B - y * y)) {
            out.emplace_back(mpq_class(x), mpq_class(y));
            out.emplace_back(mpq_class(x), mpq_class(-y));
        }
    }
    return out;
}

long long torsion_order_bound(Curve const &E, int primes)
{
    long long g = 0;
    int used = 0;
    for (std::uint64_t p = 3; used < primes; p += 2) {
        if (!is_prime(p) || !is_good_prime(E, p))
            continue;
        g = std::gcd(g, static_cast<long long>(count_points_fp(E, p)));
        ++used;
    }
    return g;
}

TorsionGroup torsion_subgroup(Curve const &E)
{
    TorsionGroup G;
    G.points.push_back(Point::infinity());
    long long bound = torsion_order_bound(E);
    if (bound == 1)
        return G;

    ShortModel model = integral_short_model(E);
    for (auto const &P : lutz_nagell_candidates(model.curve)) {
        if (torsion_order(model.curve, P) > 0)
            G.points.push_back(model.from_short(E, P));
    }
    int n = static_cast<int>(G.points.size());
    int two_torsion = 0;
    for (auto const &P : G.points)
        if (P.is_infinity() || P == negate(E, P))
            ++two_torsion;

    if (two_torsion == 4)
        G.structure = {2, n / 2};
    else
        G.structure = {1, n};
    if (!mazur_check(G.structure) || G.structure.order() != n || bound % n != 0)
        throw std::logic_error("torsion_subgroup: structure " + to_string(G.structure) + " with " +
                               std::to_string(n) + " points is outside Mazur's list");

    int cyclic_order = G.structure.n;
    Point gen;
    for (auto const &P : G.points) {
        if (!P.is_infinity() && torsion_order(E, P) == cyclic_order) {
            gen = P;
            break;
        }
    }
    if (n > 1) {
        if (gen.is_infinity())
            throw std::logic_error("torsion_subgroup: no element of order " + std::to_string(cyclic_order));
        G.generators.push_back(gen);
    }
    if (G.structure.m == 2) {
        Point half = mul(E, cyclic_order / 2, gen);
        for (auto const &P : G.points) {
            if (!P.is_infinity() && P == negate(E, P) && P != half) {
                G.generators.push_back(P);
                break;
            }
        }
    }
    return G;
}

} // namespace ellq
