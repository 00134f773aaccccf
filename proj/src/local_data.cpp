#include "ellq/local_data.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ellq/numtheory.hpp"

namespace ellq
{

std::string to_string(Reduction r)
{
    switch (r) {
    case Reduction::good:
        return "good";
    case Reduction::additive:
        return "additive";
    case Reduction::split:
        return "split";
    case Reduction::nonsplit:
        return "nonsplit";
    }
    return "?";
}

namespace
{

struct Residues
{
    std::uint64_t a1, a2, a3, a4, a6;
};

Residues residues(Curve const &E, std::uint64_t p)
{
    return {reduce_mod(E.a1(), p), reduce_mod(E.a2(), p), reduce_mod(E.a3(), p), reduce_mod(E.a4(), p),
            reduce_mod(E.a6(), p)};
}

// Affine curve y^2 = x^3 + a x + b over F_p, p >= 5.
struct ModCurve
{
    std::uint64_t p, a, b;

    struct Pt
    {
        std::uint64_t x = 0, y = 0;
        bool inf = true;
    };

    Pt add(Pt const &P, Pt const &Q) const
    {
        if (P.inf)
            return Q;
        if (Q.inf)
            return P;
        std::uint64_t lambda;
        if (P.x == Q.x) {
            if ((P.y + Q.y) % p == 0)
                return {};
            std::uint64_t num = (3 * mulmod(P.x, P.x, p) + a) % p;
            lambda = mulmod(num, invmod(2 * P.y % p, p), p);
        } else {
            std::uint64_t num = (Q.y + p - P.y) % p;
            std::uint64_t den = (Q.x + p - P.x) % p;
            lambda = mulmod(num, invmod(den, p), p);
        }
        std::uint64_t x3 = (mulmod(lambda, lambda, p) + 2 * p - P.x - Q.x) % p;
        std::uint64_t y3 = (mulmod(lambda, (P.x + p - x3) % p, p) + p - P.y) % p;
        return {x3, y3, false};
    }

    Pt neg(Pt const &P) const
    {
        if (P.inf)
            return P;
        return {P.x, (p - P.y) % p, false};
    }

    Pt mul(std::uint64_t n, Pt P) const
    {
        Pt r;
        while (n) {
            if (n & 1)
                r = add(r, P);
            n >>= 1;
            if (n)
                P = add(P, P);
        }
        return r;
    }

    std::uint64_t rhs(std::uint64_t x) const
    {
        return (mulmod(mulmod(x, x, p), x, p) + mulmod(a, x, p) + b) % p;
    }
};

std::vector<std::uint64_t> small_prime_factors(std::uint64_t n)
{
    std::vector<std::uint64_t> out;
    for (std::uint64_t q = 2; q * q <= n; ++q) {
        if (n % q == 0) {
            out.push_back(q);
            while (n % q == 0)
                n /= q;
        }
    }
    if (n > 1)
        out.push_back(n);
    return out;
}

// Exact order of P, given that P lies on a curve whose order is in
// [lo, hi] (so some multiple of ord(P) is there).
std::uint64_t point_order(ModCurve const &C, ModCurve::Pt const &P, std::uint64_t lo, std::uint64_t hi)
{
    std::uint64_t width = hi - lo;
    std::uint64_t m = static_cast<std::uint64_t>(std::ceil(std::sqrt(static_cast<double>(width + 1)) / 2.0)) + 1;
    // baby steps j P, j = 1..m, keyed by x
    std::vector<std::pair<std::uint64_t, std::uint64_t>> baby; // (x, j)
    baby.reserve(m);
    std::vector<ModCurve::Pt> jp(m + 1);
    ModCurve::Pt cur;
    for (std::uint64_t j = 1; j <= m; ++j) {
        cur = C.add(cur, P);
        jp[j] = cur;
        if (cur.inf)
            break;
        baby.emplace_back(cur.x, j);
    }
    std::sort(baby.begin(), baby.end());

    std::uint64_t found = 0;
    // R_i = [lo + m + i(2m+1)] P; find s in [-m, m] with R_i = [s] P
    ModCurve::Pt G = C.mul(2 * m + 1, P);
    std::uint64_t base = lo + m;
    ModCurve::Pt R = C.mul(base, P);
    for (std::uint64_t i = 0; base + i * (2 * m + 1) <= hi + m + 2 * m + 1; ++i) {
        std::uint64_t center = base + i * (2 * m + 1);
        if (R.inf) {
            found = center;
            break;
        }
        auto it = std::lower_bound(baby.begin(), baby.end(), std::make_pair(R.x, std::uint64_t{0}));
        bool hit = false;
        for (; it != baby.end() && it->first == R.x; ++it) {
            ModCurve::Pt const &B = jp[it->second];
            std::uint64_t j = it->second;
            if (B.y == R.y) {
                // R = jP
                if (center >= j) {
                    found = center - j;
                    hit = true;
                }
            } else {
                found = center + j;
                hit = true;
            }
            if (hit)
                break;
        }
        if (hit && found > 0)
            break;
        R = C.add(R, G);
    }
    if (found == 0)
        return 0;
    std::uint64_t ord = found;
    for (std::uint64_t q : small_prime_factors(found)) {
        while (ord % q == 0 && C.mul(ord / q, P).inf)
            ord /= q;
    }
    return ord;
}

std::uint64_t lcm_u64(std::uint64_t a, std::uint64_t b) { return a / std::gcd(a, b) * b; }

} // namespace

std::uint64_t count_points_naive(Curve const &E, std::uint64_t p)
{
    Residues r = residues(E, p);
    std::uint64_t count = 1;
    for (std::uint64_t x = 0; x < p; ++x) {
        std::uint64_t rhs = (((x + r.a2) % p * x % p + r.a4) % p * x % p + r.a6) % p;
        for (std::uint64_t y = 0; y < p; ++y) {
            std::uint64_t lhs = (y * y % p + r.a1 * x % p * y % p + r.a3 * y % p) % p;
            if (lhs == rhs)
                ++count;
        }
    }
    return count;
}

std::uint64_t smooth_points_naive(Curve const &E, std::uint64_t p)
{
    Residues r = residues(E, p);
    std::uint64_t count = 1;
    for (std::uint64_t x = 0; x < p; ++x) {
        std::uint64_t rhs = (((x + r.a2) % p * x % p + r.a4) % p * x % p + r.a6) % p;
        for (std::uint64_t y = 0; y < p; ++y) {
            std::uint64_t lhs = (y * y % p + r.a1 * x % p * y % p + r.a3 * y % p) % p;
            if (lhs != rhs)
                continue;
            // F_x = a1 y - 3x^2 - 2 a2 x - a4, F_y = 2y + a1 x + a3
            std::uint64_t fx = (r.a1 * y % p + 3 * p * p - 3 * x % p * x % p - 2 * r.a2 % p * x % p + p - r.a4) % p;
            std::uint64_t fy = (2 * y + r.a1 * x % p + r.a3) % p;
            if (fx == 0 && fy == 0)
                continue;
            ++count;
        }
    }
    return count;
}

std::uint64_t count_points_charsum(Curve const &E, std::uint64_t p)
{
    if (p == 2)
        return count_points_naive(E, p);
    // (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6
    std::uint64_t g2 = reduce_mod(E.b2(), p), g1 = reduce_mod(2 * E.b4(), p), g0 = reduce_mod(E.b6(), p);
    std::vector<char> square(p, 0);
    for (std::uint64_t i = 1; i <= p / 2; ++i)
        square[mulmod(i, i, p)] = 1;
    std::uint64_t count = 1;
    for (std::uint64_t x = 0; x < p; ++x) {
        std::uint64_t g = (mulmod((mulmod(4 % p, x, p) + g2) % p, mulmod(x, x, p), p) + mulmod(g1, x, p) + g0) % p;
        count += g == 0 ? 1 : (square[g] ? 2 : 0);
    }
    return count;
}

std::uint64_t count_points_bsgs(Curve const &E, std::uint64_t p)
{
    if (p < 5 || !is_good_prime(E, p))
        throw domain_error("count_points_bsgs needs a good prime p >= 5");
    std::uint64_t A = reduce_mod(-27 * E.c4(), p), B = reduce_mod(-54 * E.c6(), p);
    ModCurve C{p, A, B};
    std::uint64_t d = 2;
    while (legendre(d, p) != -1)
        ++d;
    std::uint64_t d2 = mulmod(d, d, p);
    ModCurve T{p, mulmod(A, d2, p), mulmod(B, mulmod(d2, d, p), p)};

    std::uint64_t w = static_cast<std::uint64_t>(std::floor(2.0 * std::sqrt(static_cast<double>(p))));
    while ((w + 1) * (w + 1) <= 4 * p)
        ++w;
    while (w * w > 4 * p)
        --w;
    std::uint64_t lo = p + 1 - w, hi = p + 1 + w;

    std::uint64_t L = 1, Lt = 1;
    std::uint64_t xe = 0, xt = 0;
    auto next_point = [p](ModCurve const &curve, std::uint64_t &x) -> ModCurve::Pt {
        for (; x < p; ++x) {
            std::uint64_t r = curve.rhs(x);
            auto s = sqrt_mod(r, p);
            if (s) {
                ModCurve::Pt P{x, *s, false};
                ++x;
                return P;
            }
        }
        return {};
    };
    for (int round = 0; round < 24; ++round) {
        ModCurve const &curve = (round % 2 == 0) ? C : T;
        std::uint64_t &x = (round % 2 == 0) ? xe : xt;
        ModCurve::Pt P = next_point(curve, x);
        if (P.inf)
            break;
        std::uint64_t ord = point_order(curve, P, lo, hi);
        if (ord == 0)
            break;
        if (round % 2 == 0)
            L = lcm_u64(L, ord);
        else
            Lt = lcm_u64(Lt, ord);
        std::uint64_t candidate = 0, hits = 0;
        for (std::uint64_t n = (lo + L - 1) / L * L; n <= hi; n += L) {
            if ((2 * p + 2 - n) % Lt == 0) {
                candidate = n;
                ++hits;
                if (hits > 1)
                    break;
            }
        }
        if (hits == 1)
            return candidate;
    }
    return count_points_charsum(E, p);
}

bool is_good_prime(Curve const &E, std::uint64_t p) { return reduce_mod(E.discriminant(), p) != 0; }

std::uint64_t count_points_fp(Curve const &E, std::uint64_t p)
{
    if (p < 1000 || !is_good_prime(E, p))
        return count_points_charsum(E, p);
    return count_points_bsgs(E, p);
}

LocalData reduction_type(Curve const &E, std::uint64_t p)
{
    LocalData ld;
    ld.p = p;
    if (is_good_prime(E, p)) {
        std::uint64_t n = count_points_fp(E, p);
        ld.kind = Reduction::good;
        ld.smooth_count = n;
        ld.ap = static_cast<long long>(p + 1) - static_cast<long long>(n);
        return ld;
    }
    // a singular Weierstrass cubic has exactly one singular point, so the
    // smooth count equals the affine count
    std::uint64_t ns = p < 100 ? smooth_points_naive(E, p) : count_points_charsum(E, p) - 1;
    ld.smooth_count = ns;
    if (ns == p)
        ld.kind = Reduction::additive;
    else if (ns + 1 == p)
        ld.kind = Reduction::split;
    else if (ns == p + 1)
        ld.kind = Reduction::nonsplit;
    else
        throw std::logic_error("reduction_type: impossible smooth count at p = " + std::to_string(p));
    ld.ap = static_cast<long long>(p) - static_cast<long long>(ns);
    return ld;
}

std::vector<LocalData> local_data_up_to(Curve const &E, std::uint64_t pmax)
{
    std::vector<LocalData> out;
    for (std::uint64_t p : primes_up_to(pmax))
        out.push_back(reduction_type(E, p));
    return out;
}

std::vector<long long> an_from_local(std::vector<LocalData> const &primes, std::size_t limit)
{
    std::vector<long long> a(limit + 1, 0);
    if (limit >= 1)
        a[1] = 1;
    if (limit < 2)
        return a;
    std::vector<LocalData const *> by_prime(limit + 1, nullptr);
    for (auto const &ld : primes)
        if (ld.p <= limit)
            by_prime[ld.p] = &ld;
    auto spf = smallest_prime_factors(limit);
    for (std::size_t n = 2; n <= limit; ++n) {
        std::size_t p = spf[n], m = n;
        while (m % p == 0)
            m /= p;
        if (m > 1) {
            a[n] = a[n / m] * a[m];
            continue;
        }
        LocalData const *ld = by_prime[p];
        if (!ld)
            throw std::logic_error("an_from_local: missing prime " + std::to_string(p));
        if (n == p)
            a[n] = ld->ap;
        else if (ld->kind == Reduction::good)
            a[n] = ld->ap * a[n / p] - static_cast<long long>(p) * a[n / p / p];
        else
            a[n] = ld->ap * a[n / p];
    }
    return a;
}

std::vector<long long> an_coefficients(Curve const &E, std::size_t limit)
{
    return an_from_local(local_data_up_to(E, limit), limit);
}

} // namespace ellq
