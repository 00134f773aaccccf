#include "ellq/heights.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "ellq/numtheory.hpp"

namespace ellq
{

namespace
{

using real = long double;

real to_real(mpz_class const &n) { return to_long_double(n); }
real to_real(mpq_class const &q) { return to_long_double(q); }

mpz_class bareiss_det(std::vector<std::vector<mpz_class>> m)
{
    std::size_t n = m.size();
    mpz_class prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            std::size_t r = k + 1;
            while (r < n && m[r][k] == 0)
                ++r;
            if (r == n)
                return 0;
            std::swap(m[k], m[r]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                m[i][j] = m[i][j] * m[k][k] - m[i][k] * m[k][j];
                mpz_divexact(m[i][j].get_mpz_t(), m[i][j].get_mpz_t(), prev.get_mpz_t());
            }
        }
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

struct Doubler
{
    mpz_class b2, b4, b6, b8;
    real r2, r4, r6, r8;

    explicit Doubler(Curve const &E)
        : b2(E.b2()), b4(E.b4()), b6(E.b6()), b8(E.b8()), r2(to_real(b2)), r4(to_real(b4)), r6(to_real(b6)),
          r8(to_real(b8))
    {
    }

    // F = X^4 - b4 X^2 Z^2 - 2 b6 X Z^3 - b8 Z^4
    mpz_class F(mpz_class const &X, mpz_class const &Z) const
    {
        mpz_class X2 = X * X, Z2 = Z * Z;
        return X2 * X2 - b4 * X2 * Z2 - 2 * b6 * X * Z2 * Z - b8 * Z2 * Z2;
    }
    // G = 4 X^3 Z + b2 X^2 Z^2 + 2 b4 X Z^3 + b6 Z^4
    mpz_class G(mpz_class const &X, mpz_class const &Z) const
    {
        mpz_class X2 = X * X, Z2 = Z * Z;
        return 4 * X2 * X * Z + b2 * X2 * Z2 + 2 * b4 * X * Z2 * Z + b6 * Z2 * Z2;
    }
};

std::vector<double> fast_estimates(Curve const &E, Point const &P, int k_max, int k_min, double tol, bool stop_early)
{
    E.require_on_curve(P);
    if (P.is_infinity() || torsion_order(E, P) > 0)
        return std::vector<double>(static_cast<std::size_t>(k_max) + 1, 0.0);

    Doubler d(E);
    mpz_class R = abs(doubling_resultant(E));
    if (R == 0)
        throw std::logic_error("canonical_height: vanishing doubling resultant");

    mpz_class M;
    mpz_pow_ui(M.get_mpz_t(), R.get_mpz_t(), static_cast<unsigned long>(k_max) + 1);
    mpz_class X = P.x().get_num(), Z = P.x().get_den();
    real lz = log_abs(Z);
    real x = to_real(P.x());
    real h = X == 0 ? lz : std::max(log_abs(X), lz);
    mpz_fdiv_r(X.get_mpz_t(), X.get_mpz_t(), M.get_mpz_t());
    mpz_fdiv_r(Z.get_mpz_t(), Z.get_mpz_t(), M.get_mpz_t());

    std::vector<double> est{static_cast<double>(h)};
    real scale = 1;
    for (int k = 1; k <= k_max; ++k) {
        mpz_class Fr = d.F(X, Z), Gr = d.G(X, Z);
        mpz_fdiv_r(Fr.get_mpz_t(), Fr.get_mpz_t(), M.get_mpz_t());
        mpz_fdiv_r(Gr.get_mpz_t(), Gr.get_mpz_t(), M.get_mpz_t());
        mpz_class g = gcd(gcd(R, Fr), Gr);
        if (g == 0)
            g = R;

        real lf, lg, xn;
        if (std::fabs(x) > 1) {
            real ix = 1 / x;
            real f1 = 1 - ix * ix * (d.r4 + ix * (2 * d.r6 + ix * d.r8));
            real g1 = 4 + ix * (d.r2 + ix * (2 * d.r4 + ix * d.r6));
            real lx = std::log(std::fabs(x));
            lf = 4 * lx + std::log(std::fabs(f1));
            lg = 3 * lx + std::log(std::fabs(g1));
            xn = x * f1 / g1;
        } else {
            real f = x * x * x * x - d.r4 * x * x - 2 * d.r6 * x - d.r8;
            real gx = ((4 * x + d.r2) * x + 2 * d.r4) * x + d.r6;
            lf = std::log(std::fabs(f));
            lg = std::log(std::fabs(gx));
            xn = f / gx;
        }
        real lgcd = log_abs(g);
        real lxn = 4 * lz + lf - lgcd;
        lz = 4 * lz + lg - lgcd;
        x = xn;
        h = std::max(lxn, lz);
        scale *= 4;
        est.push_back(static_cast<double>(h / scale));

        mpz_divexact(M.get_mpz_t(), M.get_mpz_t(), R.get_mpz_t());
        mpz_divexact(Fr.get_mpz_t(), Fr.get_mpz_t(), g.get_mpz_t());
        mpz_divexact(Gr.get_mpz_t(), Gr.get_mpz_t(), g.get_mpz_t());
        mpz_fdiv_r(X.get_mpz_t(), Fr.get_mpz_t(), M.get_mpz_t());
        mpz_fdiv_r(Z.get_mpz_t(), Gr.get_mpz_t(), M.get_mpz_t());

        if (stop_early && k >= k_min && std::fabs(est[k] - est[k - 1]) < tol)
            break;
    }
    return est;
}

} // namespace

mpz_class doubling_resultant(Curve const &E)
{
    // coefficients in X^4, X^3 Z, ..., Z^4
    std::array<mpz_class, 5> f{1, 0, -E.b4(), -2 * E.b6(), -E.b8()};
    std::array<mpz_class, 5> g{0, 4, E.b2(), 2 * E.b4(), E.b6()};
    std::vector<std::vector<mpz_class>> m(8, std::vector<mpz_class>(8, 0));
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 5; ++c) {
            m[r][r + c] = f[c];
            m[r + 4][r + c] = g[c];
        }
    }
    return bareiss_det(std::move(m));
}

std::vector<double> doubling_estimates(Curve const &curve, Point const &p, int k_max)
{
    return fast_estimates(curve, p, k_max, k_max, 0.0, false);
}

std::vector<double> doubling_estimates_exact(Curve const &curve, Point const &p, int k_max)
{
    curve.require_on_curve(p);
    std::vector<double> out;
    Point q = p;
    double scale = 1;
    for (int k = 0; k <= k_max; ++k) {
        out.push_back(point_height(q) / scale);
        q = add(curve, q, q);
        scale *= 4;
    }
    return out;
}

double canonical_height(Curve const &curve, Point const &p, HeightOptions const &opts)
{
    if (opts.max_doublings < 1)
        throw domain_error("canonical_height: need at least one doubling");
    auto est = fast_estimates(curve, p, opts.max_doublings, opts.min_doublings, opts.tolerance, true);
    double h = est.back();
    if (!std::isfinite(h))
        throw domain_error("canonical_height: coordinate magnitudes left the floating range");
    return h;
}

double height_pairing(Curve const &curve, Point const &p, Point const &q, HeightOptions const &opts)
{
    double hpq = canonical_height(curve, add(curve, p, q), opts);
    return (hpq - canonical_height(curve, p, opts) - canonical_height(curve, q, opts)) / 2;
}

HeightPairing height_pairing_matrix(Curve const &curve, std::vector<Point> const &gens, HeightOptions const &opts)
{
    std::size_t n = gens.size();
    HeightPairing out;
    out.matrix.assign(n, std::vector<double>(n, 0.0));
    std::vector<double> diag(n);
    for (std::size_t i = 0; i < n; ++i)
        diag[i] = canonical_height(curve, gens[i], opts);
    for (std::size_t i = 0; i < n; ++i) {
        out.matrix[i][i] = diag[i];
        for (std::size_t j = i + 1; j < n; ++j) {
            double hs = canonical_height(curve, add(curve, gens[i], gens[j]), opts);
            out.matrix[i][j] = out.matrix[j][i] = (hs - diag[i] - diag[j]) / 2;
        }
    }

    auto a = out.matrix;
    double det = 1;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t r = k + 1; r < n; ++r)
            if (std::fabs(a[r][k]) > std::fabs(a[piv][k]))
                piv = r;
        if (a[piv][k] == 0) {
            det = 0;
            break;
        }
        if (piv != k) {
            std::swap(a[piv], a[k]);
            det = -det;
        }
        det *= a[k][k];
        for (std::size_t r = k + 1; r < n; ++r) {
            double f = a[r][k] / a[k][k];
            for (std::size_t c = k; c < n; ++c)
                a[r][c] -= f * a[k][c];
        }
    }
    out.regulator = det;
    return out;
}

double regulator(Curve const &curve, std::vector<Point> const &gens, HeightOptions const &opts)
{
    return height_pairing_matrix(curve, gens, opts).regulator;
}

} // namespace ellq
