#pragma once

#include <array>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

#include "ellq/error.hpp"

namespace ellq
{

// A rational point in affine coordinates or the point at infinity.
class Point
{
  public:
    Point() = default; // infinity
    Point(mpq_class x, mpq_class y) : inf_(false), x_(std::move(x)), y_(std::move(y))
    {
        x_.canonicalize();
        y_.canonicalize();
    }

    static Point infinity() { return Point(); }

    bool is_infinity() const { return inf_; }
    mpq_class const &x() const { return x_; }
    mpq_class const &y() const { return y_; }

    bool operator==(Point const &o) const
    {
        if (inf_ || o.inf_)
            return inf_ == o.inf_;
        return x_ == o.x_ && y_ == o.y_;
    }
    bool operator!=(Point const &o) const { return !(*this == o); }

    std::string to_string() const;

  private:
    bool inf_ = true;
    mpq_class x_, y_;
};

std::ostream &operator<<(std::ostream &o, Point const &p);

/*
 * Integral Weierstrass model
 *   y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6.
 * Construction rejects singular models (discriminant zero).
 */
class Curve
{
  public:
    Curve(mpz_class a1, mpz_class a2, mpz_class a3, mpz_class a4, mpz_class a6);

    static Curve short_weierstrass(mpz_class const &A, mpz_class const &B) { return Curve(0, 0, 0, A, B); }

    mpz_class const &a1() const { return a_[0]; }
    mpz_class const &a2() const { return a_[1]; }
    mpz_class const &a3() const { return a_[2]; }
    mpz_class const &a4() const { return a_[3]; }
    mpz_class const &a6() const { return a_[4]; }
    std::array<mpz_class, 5> const &coefficients() const { return a_; }

    mpz_class b2() const { return a1() * a1() + 4 * a2(); }
    mpz_class b4() const { return 2 * a4() + a1() * a3(); }
    mpz_class b6() const { return a3() * a3() + 4 * a6(); }
    mpz_class b8() const;
    mpz_class c4() const;
    mpz_class c6() const;
    mpz_class const &discriminant() const { return disc_; }

    bool is_short() const { return a1() == 0 && a2() == 0 && a3() == 0; }

    // Coefficients of the isomorphic rational model y^2 = x^3 + A x + B.
    mpq_class short_a() const;
    mpq_class short_b() const;

    mpq_class j_invariant() const;

    bool contains(Point const &p) const;
    void require_on_curve(Point const &p) const;

    bool operator==(Curve const &o) const { return a_ == o.a_; }

    std::string to_string() const; // "a1,a2,a3,a4,a6"

  private:
    std::array<mpz_class, 5> a_;
    mpz_class disc_;
};

// The integral short model y^2 = x^3 + A u^4 x + B u^6 with the smallest
// positive integer u clearing denominators of the rational short form.
struct ShortModel
{
    Curve curve;
    mpz_class u;

    // Map between the source model and this integral short model.
    Point to_short(Curve const &source, Point const &p) const;
    Point from_short(Curve const &source, Point const &p) const;
};

ShortModel integral_short_model(Curve const &curve);
Curve to_short_form(Curve const &curve);

// j-invariant of y^2 = x^3 + A x + B computed directly from A, B.
mpq_class j_from_short(mpq_class const &A, mpq_class const &B);

// 4A^3 + 27B^2 of the integral short model.
mpz_class disc_core(Curve const &curve);
// max{4|A^3|, 27 B^2} of the integral short model.
mpz_class curve_height(Curve const &curve);
// log max(|num x|, |den x|); zero at infinity.
double point_height(Point const &p);

Point negate(Curve const &curve, Point const &p);
Point add(Curve const &curve, Point const &p, Point const &q);
Point sub(Curve const &curve, Point const &p, Point const &q);
Point mul(Curve const &curve, long long n, Point const &p);

// Order of p if it is at most max_order, otherwise 0.
int torsion_order(Curve const &curve, Point const &p, int max_order = 12);

// Reduce the model at every prime where a smaller integral model with the
// same (c4, c6) up to u^4, u^6 exists. Returns the model in the normalized
// form a1, a3 in {0, 1}, a2 in {-1, 0, 1} when any reduction happened.
Curve minimal_model(Curve const &curve);

// Integral model with the given invariants if one exists.
std::optional<Curve> curve_from_c4c6(mpz_class const &c4, mpz_class const &c6);

// "A,B" or "a1,a2,a3,a4,a6"; decimal integers, optionally signed.
Curve parse_coefficients(std::string_view text);
// "x,y" with rational coordinates ("p/q" allowed) or "inf".
Point parse_point(std::string_view text);

} // namespace ellq
