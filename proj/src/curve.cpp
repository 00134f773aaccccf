#include "ellq/curve.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "ellq/numtheory.hpp"

namespace ellq
{

namespace
{

std::string trim(std::string_view s)
{
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos)
        return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return out;
}

mpz_class parse_integer(std::string const &tok)
{
    std::string t = tok;
    if (!t.empty() && t[0] == '+')
        t.erase(0, 1);
    if (t.empty() || t == "-" || t.find_first_not_of("-0123456789") != std::string::npos ||
        t.find('-', 1) != std::string::npos)
        throw std::invalid_argument("malformed integer '" + tok + "'");
    return mpz_class(t, 10);
}

mpq_class parse_rational(std::string const &tok)
{
    auto slash = tok.find('/');
    if (slash == std::string::npos)
        return mpq_class(parse_integer(tok));
    mpz_class num = parse_integer(trim(std::string_view(tok).substr(0, slash)));
    mpz_class den = parse_integer(trim(std::string_view(tok).substr(slash + 1)));
    if (den == 0)
        throw std::invalid_argument("zero denominator in '" + tok + "'");
    mpq_class q(num, den);
    q.canonicalize();
    return q;
}

unsigned valuation(mpz_class n, unsigned long p)
{
    unsigned v = 0;
    if (n == 0)
        return 1000;
    while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
        mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
        ++v;
    }
    return v;
}

Point add_unchecked(Curve const &E, Point const &P, Point const &Q)
{
    if (P.is_infinity())
        return Q;
    if (Q.is_infinity())
        return P;
    mpq_class const &x1 = P.x(), &y1 = P.y(), &x2 = Q.x(), &y2 = Q.y();
    mpq_class a1(E.a1()), a2(E.a2()), a3(E.a3()), a4(E.a4()), a6(E.a6());
    mpq_class lambda, nu;
    if (x1 == x2) {
        mpq_class s = y1 + y2 + a1 * x2 + a3;
        if (s == 0)
            return Point::infinity();
        mpq_class den = 2 * y1 + a1 * x1 + a3;
        lambda = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) / den;
        nu = (-x1 * x1 * x1 + a4 * x1 + 2 * a6 - a3 * y1) / den;
    } else {
        mpq_class dx = x2 - x1;
        lambda = (y2 - y1) / dx;
        nu = (y1 * x2 - y2 * x1) / dx;
    }
    mpq_class x3 = lambda * lambda + a1 * lambda - a2 - x1 - x2;
    mpq_class y3 = -(lambda + a1) * x3 - nu - a3;
    return Point(x3, y3);
}

} // namespace

std::string Point::to_string() const
{
    if (inf_)
        return "inf";
    return x_.get_str() + "," + y_.get_str();
}

std::ostream &operator<<(std::ostream &o, Point const &p) { return o << p.to_string(); }

Curve::Curve(mpz_class a1, mpz_class a2, mpz_class a3, mpz_class a4, mpz_class a6)
    : a_{std::move(a1), std::move(a2), std::move(a3), std::move(a4), std::move(a6)}
{
    mpz_class B2 = b2(), B4 = b4(), B6 = b6(), B8 = b8();
    disc_ = -B2 * B2 * B8 - 8 * B4 * B4 * B4 - 27 * B6 * B6 + 9 * B2 * B4 * B6;
    if (disc_ == 0)
        throw domain_error("singular curve (discriminant 0)");
}

mpz_class Curve::b8() const
{
    return a1() * a1() * a6() + 4 * a2() * a6() - a1() * a3() * a4() + a2() * a3() * a3() - a4() * a4();
}

mpz_class Curve::c4() const
{
    mpz_class B2 = b2();
    return B2 * B2 - 24 * b4();
}

mpz_class Curve::c6() const
{
    mpz_class B2 = b2();
    return -B2 * B2 * B2 + 36 * B2 * b4() - 216 * b6();
}

mpq_class Curve::short_a() const
{
    mpq_class r(-c4(), 48);
    r.canonicalize();
    return r;
}

mpq_class Curve::short_b() const
{
    mpq_class r(-c6(), 864);
    r.canonicalize();
    return r;
}

mpq_class Curve::j_invariant() const
{
    mpz_class C4 = c4();
    mpq_class j(C4 * C4 * C4, disc_);
    j.canonicalize();
    return j;
}

bool Curve::contains(Point const &p) const
{
    if (p.is_infinity())
        return true;
    mpq_class const &x = p.x(), &y = p.y();
    mpq_class lhs = y * y + mpq_class(a1()) * x * y + mpq_class(a3()) * y;
    mpq_class rhs = ((x + mpq_class(a2())) * x + mpq_class(a4())) * x + mpq_class(a6());
    return lhs == rhs;
}

void Curve::require_on_curve(Point const &p) const
{
    if (!contains(p))
        throw domain_error("point " + p.to_string() + " is not on the curve " + to_string());
}

std::string Curve::to_string() const
{
    std::ostringstream o;
    for (int i = 0; i < 5; ++i)
        o << (i ? "," : "") << a_[i];
    return o.str();
}

Point ShortModel::to_short(Curve const &E, Point const &p) const
{
    if (p.is_infinity())
        return p;
    mpq_class xi = p.x() + mpq_class(E.b2(), 12);
    mpq_class eta = p.y() + (mpq_class(E.a1()) * p.x() + mpq_class(E.a3())) / 2;
    mpz_class u2 = u * u;
    return Point(xi * mpq_class(u2), eta * mpq_class(u2 * u));
}

Point ShortModel::from_short(Curve const &E, Point const &p) const
{
    if (p.is_infinity())
        return p;
    mpz_class u2 = u * u;
    mpq_class xi = p.x() / mpq_class(u2);
    mpq_class eta = p.y() / mpq_class(u2 * u);
    mpq_class x = xi - mpq_class(E.b2(), 12);
    mpq_class y = eta - (mpq_class(E.a1()) * x + mpq_class(E.a3())) / 2;
    return Point(x, y);
}

ShortModel integral_short_model(Curve const &E)
{
    if (E.is_short())
        return {E, 1};
    mpq_class A = E.short_a(), B = E.short_b();
    mpz_class u = 1;
    for (unsigned long p : {2ul, 3ul}) {
        unsigned va = valuation(A.get_den(), p), vb = valuation(B.get_den(), p);
        unsigned e = std::max((va + 3) / 4, (vb + 5) / 6);
        for (unsigned i = 0; i < e; ++i)
            u *= p;
    }
    mpz_class u2 = u * u, u4 = u2 * u2, u6 = u4 * u2;
    mpq_class As = A * mpq_class(u4), Bs = B * mpq_class(u6);
    As.canonicalize();
    Bs.canonicalize();
    return {Curve::short_weierstrass(As.get_num(), Bs.get_num()), u};
}

Curve to_short_form(Curve const &E) { return integral_short_model(E).curve; }

mpq_class j_from_short(mpq_class const &A, mpq_class const &B)
{
    mpq_class a3 = 4 * A * A * A;
    mpq_class d = a3 + 27 * B * B;
    if (d == 0)
        throw domain_error("singular short model");
    mpq_class j = 1728 * a3 / d;
    j.canonicalize();
    return j;
}

mpz_class disc_core(Curve const &E)
{
    Curve S = to_short_form(E);
    mpz_class const &A = S.a4(), &B = S.a6();
    return 4 * A * A * A + 27 * B * B;
}

mpz_class curve_height(Curve const &E)
{
    Curve S = to_short_form(E);
    mpz_class const &A = S.a4(), &B = S.a6();
    mpz_class h1 = 4 * abs(A * A * A), h2 = 27 * B * B;
    return h1 > h2 ? h1 : h2;
}

double point_height(Point const &p)
{
    if (p.is_infinity())
        return 0.0;
    mpz_class const &n = p.x().get_num(), &d = p.x().get_den();
    mpz_class m = abs(n) > d ? mpz_class(abs(n)) : d;
    return static_cast<double>(log_abs(m));
}

Point negate(Curve const &E, Point const &p)
{
    if (p.is_infinity())
        return p;
    return Point(p.x(), -p.y() - mpq_class(E.a1()) * p.x() - mpq_class(E.a3()));
}

Point add(Curve const &E, Point const &p, Point const &q)
{
    E.require_on_curve(p);
    E.require_on_curve(q);
    return add_unchecked(E, p, q);
}

Point sub(Curve const &E, Point const &p, Point const &q) { return add(E, p, negate(E, q)); }

Point mul(Curve const &E, long long n, Point const &p)
{
    E.require_on_curve(p);
    if (n < 0)
        return negate(E, mul(E, -n, p));
    Point result, base = p;
    unsigned long long k = static_cast<unsigned long long>(n);
    while (k) {
        if (k & 1)
            result = add_unchecked(E, result, base);
        k >>= 1;
        if (k)
            base = add_unchecked(E, base, base);
    }
    return result;
}

int torsion_order(Curve const &E, Point const &p, int max_order)
{
    E.require_on_curve(p);
    Point q = p;
    for (int k = 1; k <= max_order; ++k) {
        if (q.is_infinity())
            return k;
        q = add_unchecked(E, q, p);
    }
    return 0;
}

std::optional<Curve> curve_from_c4c6(mpz_class const &c4, mpz_class const &c6)
{
    // b2 = -c6 mod 12 taken in [-5, 6], then solve for b4, b6 and the a-invariants
    mpz_class b2;
    mpz_class m = -c6;
    mpz_fdiv_r_ui(b2.get_mpz_t(), m.get_mpz_t(), 12);
    if (b2 > 6)
        b2 -= 12;
    mpz_class t = b2 * b2 - c4;
    if (!mpz_divisible_ui_p(t.get_mpz_t(), 24))
        return std::nullopt;
    mpz_class b4 = t / 24;
    mpz_class s = -b2 * b2 * b2 + 36 * b2 * b4 - c6;
    if (!mpz_divisible_ui_p(s.get_mpz_t(), 216))
        return std::nullopt;
    mpz_class b6 = s / 216;
    mpz_class a1, a3;
    mpz_fdiv_r_ui(a1.get_mpz_t(), b2.get_mpz_t(), 2);
    mpz_fdiv_r_ui(a3.get_mpz_t(), b6.get_mpz_t(), 2);
    mpz_class n2 = b2 - a1, n4 = b4 - a1 * a3, n6 = b6 - a3;
    if (!mpz_divisible_ui_p(n2.get_mpz_t(), 4) || !mpz_divisible_ui_p(n4.get_mpz_t(), 2) ||
        !mpz_divisible_ui_p(n6.get_mpz_t(), 4))
        return std::nullopt;
    try {
        Curve E(a1, n2 / 4, a3, n4 / 2, n6 / 4);
        if (E.c4() != c4 || E.c6() != c6)
            return std::nullopt;
        return E;
    } catch (domain_error const &) {
        return std::nullopt;
    }
}

Curve minimal_model(Curve const &E)
{
    mpz_class c4 = E.c4(), c6 = E.c6();
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), c4.get_mpz_t(), c6.get_mpz_t());
    std::optional<Curve> best;
    for (auto const &pe : factor(g)) {
        mpz_class const &p = pe.first;
        mpz_class p4 = p * p * p * p, p6 = p4 * p * p;
        while (mpz_divisible_p(c4.get_mpz_t(), p4.get_mpz_t()) && mpz_divisible_p(c6.get_mpz_t(), p6.get_mpz_t())) {
            auto reduced = curve_from_c4c6(c4 / p4, c6 / p6);
            if (!reduced)
                break;
            c4 /= p4;
            c6 /= p6;
            best = reduced;
        }
    }
    return best ? *best : E;
}

Curve parse_coefficients(std::string_view text)
{
    auto parts = split(text, ',');
    std::vector<mpz_class> v;
    for (auto const &t : parts)
        v.push_back(parse_integer(t));
    if (v.size() == 2)
        return Curve::short_weierstrass(v[0], v[1]);
    if (v.size() == 5)
        return Curve(v[0], v[1], v[2], v[3], v[4]);
    throw std::invalid_argument("curve must be 'A,B' or 'a1,a2,a3,a4,a6'");
}

Point parse_point(std::string_view text)
{
    std::string t = trim(text);
    if (t == "inf" || t == "infinity" || t == "oo")
        return Point::infinity();
    if (!t.empty() && t.front() == '(' && t.back() == ')')
        t = trim(std::string_view(t).substr(1, t.size() - 2));
    auto parts = split(t, ',');
    if (parts.size() != 2)
        throw std::invalid_argument("point must be 'x,y' or 'inf'");
    return Point(parse_rational(parts[0]), parse_rational(parts[1]));
}

} // namespace ellq
