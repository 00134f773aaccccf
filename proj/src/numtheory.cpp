#include "ellq/numtheory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ellq
{

std::vector<std::uint64_t> primes_up_to(std::uint64_t limit)
{
    std::vector<std::uint64_t> out;
    if (limit < 2)
        return out;
    std::vector<bool> composite(limit + 1, false);
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (composite[i])
            continue;
        out.push_back(i);
        for (std::uint64_t j = i * i; j <= limit; j += i)
            composite[j] = true;
    }
    return out;
}

std::vector<std::uint32_t> smallest_prime_factors(std::uint64_t limit)
{
    std::vector<std::uint32_t> spf(limit + 1, 0);
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (spf[i])
            continue;
        for (std::uint64_t j = i; j <= limit; j += i)
            if (!spf[j])
                spf[j] = static_cast<std::uint32_t>(i);
    }
    return spf;
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m)
{
    std::uint64_t r = 1 % m;
    base %= m;
    while (exp) {
        if (exp & 1)
            r = mulmod(r, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return r;
}

std::uint64_t invmod(std::uint64_t a, std::uint64_t p)
{
    // extended Euclid; a and p coprime
    std::int64_t t = 0, nt = 1;
    std::int64_t r = static_cast<std::int64_t>(p), nr = static_cast<std::int64_t>(a % p);
    while (nr) {
        std::int64_t q = r / nr;
        std::tie(t, nt) = std::make_pair(nt, t - q * nt);
        std::tie(r, nr) = std::make_pair(nr, r - q * nr);
    }
    if (r != 1)
        throw std::domain_error("invmod: not invertible");
    if (t < 0)
        t += static_cast<std::int64_t>(p);
    return static_cast<std::uint64_t>(t);
}

bool is_prime(std::uint64_t n)
{
    if (n < 2)
        return false;
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0)
            return n == p;
    }
    std::uint64_t d = n - 1;
    unsigned s = 0;
    while (!(d & 1)) {
        d >>= 1;
        ++s;
    }
    // deterministic for 64-bit inputs
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1)
            continue;
        bool witness = true;
        for (unsigned i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness)
            return false;
    }
    return true;
}

bool is_probable_prime(mpz_class const &n)
{
    return mpz_probab_prime_p(n.get_mpz_t(), 30) > 0;
}

namespace
{

mpz_class rho_split(mpz_class const &n)
{
    if (mpz_even_p(n.get_mpz_t()))
        return 2;
    for (unsigned long c = 1;; ++c) {
        mpz_class y = 2, x, g = 1, q = 1, ys;
        unsigned long r = 1, m = 128;
        auto f = [&](mpz_class const &v) -> mpz_class {
            mpz_class w = v * v + c;
            mpz_mod(w.get_mpz_t(), w.get_mpz_t(), n.get_mpz_t());
            return w;
        };
        do {
            x = y;
            for (unsigned long i = 0; i < r; ++i)
                y = f(y);
            unsigned long k = 0;
            do {
                ys = y;
                for (unsigned long i = 0; i < std::min(m, r - k); ++i) {
                    y = f(y);
                    mpz_class diff = x - y;
                    q = q * abs(diff);
                    mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
                }
                mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
                k += m;
            } while (k < r && g == 1);
            r *= 2;
        } while (g == 1);
        if (g == n) {
            do {
                ys = f(ys);
                mpz_class diff = abs(x - ys);
                mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
            } while (g == 1);
        }
        if (g != n)
            return g;
    }
}

void factor_into(mpz_class n, std::vector<mpz_class> &out)
{
    if (n == 1)
        return;
    if (is_probable_prime(n)) {
        out.push_back(n);
        return;
    }
    mpz_class root;
    if (is_square(n, &root)) {
        factor_into(root, out);
        factor_into(root, out);
        return;
    }
    mpz_class d = rho_split(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

} // namespace

std::vector<prime_power> factor(mpz_class const &n_in)
{
    if (n_in == 0)
        throw std::domain_error("factor: zero");
    mpz_class n = abs(n_in);
    std::vector<mpz_class> primes;
    for (unsigned long p = 2; p < 100000; p += (p == 2 ? 1 : 2)) {
        if (n == 1)
            break;
        if (mpz_class(p) * p > n)
            break;
        while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            primes.emplace_back(p);
            mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
        }
    }
    factor_into(n, primes);
    std::sort(primes.begin(), primes.end());
    std::vector<prime_power> out;
    for (auto const &p : primes) {
        if (!out.empty() && out.back().first == p)
            ++out.back().second;
        else
            out.emplace_back(p, 1u);
    }
    return out;
}

mpz_class square_part_root(mpz_class const &n)
{
    mpz_class s = 1;
    for (auto const &[p, e] : factor(n)) {
        for (unsigned i = 0; i < e / 2; ++i)
            s *= p;
    }
    return s;
}

std::vector<mpz_class> positive_divisors(std::vector<prime_power> const &fac)
{
    std::vector<mpz_class> divs{1};
    for (auto const &[p, e] : fac) {
        std::size_t n = divs.size();
        mpz_class pk = 1;
        for (unsigned k = 1; k <= e; ++k) {
            pk *= p;
            for (std::size_t i = 0; i < n; ++i)
                divs.push_back(divs[i] * pk);
        }
    }
    std::sort(divs.begin(), divs.end());
    return divs;
}

int legendre(std::uint64_t a, std::uint64_t p)
{
    a %= p;
    if (a == 0)
        return 0;
    return powmod(a, (p - 1) / 2, p) == 1 ? 1 : -1;
}

std::optional<std::uint64_t> sqrt_mod(std::uint64_t a, std::uint64_t p)
{
    a %= p;
    if (a == 0)
        return 0;
    if (p == 2)
        return a;
    if (legendre(a, p) != 1)
        return std::nullopt;
    if (p % 4 == 3)
        return powmod(a, (p + 1) / 4, p);
    // Tonelli-Shanks
    std::uint64_t q = p - 1;
    unsigned s = 0;
    while (!(q & 1)) {
        q >>= 1;
        ++s;
    }
    std::uint64_t z = 2;
    while (legendre(z, p) != -1)
        ++z;
    std::uint64_t m = s, c = powmod(z, q, p), t = powmod(a, q, p), r = powmod(a, (q + 1) / 2, p);
    while (t != 1) {
        std::uint64_t i = 0, tt = t;
        while (tt != 1) {
            tt = mulmod(tt, tt, p);
            ++i;
        }
        std::uint64_t b = c;
        for (std::uint64_t j = 0; j + 1 < m - i; ++j)
            b = mulmod(b, b, p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    return r;
}

std::uint64_t reduce_mod(mpz_class const &a, std::uint64_t p)
{
    return mpz_fdiv_ui(a.get_mpz_t(), p);
}

int kronecker(long long d, long long n)
{
    if (n <= 0)
        throw std::domain_error("kronecker: n must be positive");
    return mpz_kronecker(mpz_class(static_cast<long>(d)).get_mpz_t(), mpz_class(static_cast<long>(n)).get_mpz_t());
}

bool is_fundamental_discriminant(long long d)
{
    if (d == 0 || d == 1)
        return false;
    auto squarefree = [](long long m) {
        m = m < 0 ? -m : m;
        for (long long p = 2; p * p <= m; ++p)
            if (m % (p * p) == 0)
                return false;
        return true;
    };
    long long r = ((d % 4) + 4) % 4;
    if (r == 1)
        return squarefree(d);
    if (r == 0) {
        long long m = d / 4;
        long long mr = ((m % 4) + 4) % 4;
        return (mr == 2 || mr == 3) && squarefree(m);
    }
    return false;
}

mpq_class best_rational(long double x, mpz_class const &max_den)
{
    // convergents h/k of the continued fraction of x
    mpz_class h_prev = 0, h = 1, k_prev = 1, k = 0;
    long double rem = x;
    mpq_class best(0);
    bool have = false;
    for (int iter = 0; iter < 64; ++iter) {
        long double a_f = std::floor(rem);
        mpz_class a;
        mpz_set_d(a.get_mpz_t(), static_cast<double>(a_f));
        // large partial quotients lose precision as doubles; refine with long double
        if (std::fabs(a_f) > 1e15L) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.0Lf", a_f);
            a = mpz_class(buf, 10);
        }
        mpz_class h_next = a * h + h_prev;
        mpz_class k_next = a * k + k_prev;
        if (k_next > max_den) {
            // best semiconvergent within the bound
            mpz_class t = (max_den - k_prev) / k;
            if (t > 0) {
                mpq_class semi(t * h + h_prev, t * k + k_prev);
                semi.canonicalize();
                if (!have || std::fabs(semi.get_d() - static_cast<double>(x)) <
                                 std::fabs(best.get_d() - static_cast<double>(x)))
                    best = semi;
            }
            return best;
        }
        h_prev = h;
        h = h_next;
        k_prev = k;
        k = k_next;
        best = mpq_class(h, k);
        best.canonicalize();
        have = true;
        long double frac = rem - a_f;
        if (frac < 1e-18L * std::max<long double>(1, std::fabs(x)))
            break;
        rem = 1 / frac;
    }
    return best;
}

mpz_class isqrt(mpz_class const &n)
{
    if (n < 0)
        throw std::domain_error("isqrt of negative");
    mpz_class r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

bool is_square(mpz_class const &n, mpz_class *root)
{
    if (n < 0)
        return false;
    if (!mpz_perfect_square_p(n.get_mpz_t()))
        return false;
    if (root)
        *root = isqrt(n);
    return true;
}

long double log_abs(mpz_class const &n)
{
    if (n == 0)
        throw std::domain_error("log of zero");
    long e = 0;
    double m = mpz_get_d_2exp(&e, n.get_mpz_t());
    return std::log(std::fabs(static_cast<long double>(m))) + static_cast<long double>(e) * std::log(2.0L);
}

long double to_long_double(mpz_class const &n)
{
    if (n.fits_slong_p())
        return static_cast<long double>(n.get_si());
    std::size_t bits = mpz_sizeinbase(n.get_mpz_t(), 2);
    mpz_class top;
    mpz_tdiv_q_2exp(top.get_mpz_t(), n.get_mpz_t(), bits - 64);
    mpz_class hi, lo;
    mpz_tdiv_q_2exp(hi.get_mpz_t(), top.get_mpz_t(), 32);
    mpz_tdiv_r_2exp(lo.get_mpz_t(), top.get_mpz_t(), 32);
    long double m = static_cast<long double>(hi.get_si()) * 4294967296.0L + static_cast<long double>(lo.get_si());
    return std::ldexp(m, static_cast<int>(bits - 64));
}

long double to_long_double(mpq_class const &q)
{
    mpz_class const &n = q.get_num(), &d = q.get_den();
    if (n.fits_slong_p() && d.fits_slong_p())
        return static_cast<long double>(n.get_si()) / static_cast<long double>(d.get_si());
    std::size_t bn = mpz_sizeinbase(n.get_mpz_t(), 2), bd = mpz_sizeinbase(d.get_mpz_t(), 2);
    // 70 significant bits in the quotient
    long shift = static_cast<long>(bd) - static_cast<long>(bn) + 70;
    mpz_class num = n, quo;
    if (shift > 0)
        mpz_mul_2exp(num.get_mpz_t(), num.get_mpz_t(), static_cast<unsigned long>(shift));
    else
        mpz_tdiv_q_2exp(num.get_mpz_t(), num.get_mpz_t(), static_cast<unsigned long>(-shift));
    mpz_tdiv_q(quo.get_mpz_t(), num.get_mpz_t(), d.get_mpz_t());
    return std::ldexp(to_long_double(quo), static_cast<int>(-shift));
}

} // namespace ellq
