#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include <gmpxx.h>

#include "ellq/error.hpp"

namespace ellq
{

// F(x, y, z) = xX + yY + zZ = [[x, y + z], [y - z, -x]] with
// X = diag(1, -1), Y = [[0, 1], [1, 0]], Z = [[0, 1], [-1, 0]].
template <class T> struct LieElement
{
    T x{}, y{}, z{};

    T delta() const { return x * x + y * y - z * z; }
    std::array<T, 4> matrix() const { return {x, y + z, y - z, -x}; }

    static LieElement from_matrix(std::array<T, 4> const &m)
    {
        T tr = m[0] + m[3];
        if constexpr (std::is_floating_point_v<T>) {
            T scale = 1 + std::max({std::fabs(m[0]), std::fabs(m[1]), std::fabs(m[2]), std::fabs(m[3])});
            if (std::fabs(tr) > 1e-9 * scale)
                throw std::logic_error("sl2: matrix is not traceless");
        } else if (tr != 0) {
            throw std::logic_error("sl2: matrix is not traceless");
        }
        return {(m[0] - m[3]) / 2, (m[1] + m[2]) / 2, (m[1] - m[2]) / 2};
    }

    LieElement operator+(LieElement const &o) const { return {x + o.x, y + o.y, z + o.z}; }
    LieElement operator-(LieElement const &o) const { return {x - o.x, y - o.y, z - o.z}; }
    LieElement operator-() const { return {-x, -y, -z}; }
    LieElement operator*(T const &s) const { return {x * s, y * s, z * s}; }
    bool operator==(LieElement const &o) const { return x == o.x && y == o.y && z == o.z; }
};

using LieD = LieElement<double>;
using LieQ = LieElement<mpq_class>;

template <class T> std::array<T, 4> mat_mul(std::array<T, 4> const &a, std::array<T, 4> const &b)
{
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
            a[2] * b[1] + a[3] * b[3]};
}

template <class T> LieElement<T> bracket(LieElement<T> const &a, LieElement<T> const &b)
{
    auto p = mat_mul(a.matrix(), b.matrix()), q = mat_mul(b.matrix(), a.matrix());
    return LieElement<T>::from_matrix({p[0] - q[0], p[1] - q[1], p[2] - q[2], p[3] - q[3]});
}

template <class T> LieElement<T> cartan(LieElement<T> const &f)
{
    auto m = f.matrix();
    return LieElement<T>::from_matrix({-m[0], -m[2], -m[1], -m[3]});
}

template <class T> bool ks_triple_check(LieElement<T> const &x, LieElement<T> const &s, LieElement<T> const &t)
{
    return bracket(x, s) == s * T(2) && bracket(x, t) == t * T(-2) && bracket(s, t) == x;
}

template <class T> LieElement<T> basis_X() { return {T(1), T(0), T(0)}; }
template <class T> LieElement<T> basis_Y() { return {T(0), T(1), T(0)}; }
template <class T> LieElement<T> basis_Z() { return {T(0), T(0), T(1)}; }
template <class T> LieElement<T> nilpotent_S() { return {T(0), T(1) / 2, T(1) / 2}; }
template <class T> LieElement<T> nilpotent_T() { return {T(0), T(1) / 2, T(-1) / 2}; }

// [[a, b], [c, d]] with ad - bc = 1.
template <class T> struct GroupElement
{
    T a{1}, b{0}, c{0}, d{1};

    std::array<T, 4> matrix() const { return {a, b, c, d}; }
    GroupElement inverse() const { return {d, -b, -c, a}; }
    T det() const { return a * d - b * c; }
};

using GroupD = GroupElement<double>;
using GroupQ = GroupElement<mpq_class>;

template <class T> LieElement<T> conjugate(GroupElement<T> const &g, LieElement<T> const &f)
{
    auto m = mat_mul(mat_mul(g.matrix(), f.matrix()), g.inverse().matrix());
    return LieElement<T>::from_matrix(m);
}

enum class OrbitTag { hyperbolic, elliptic, nilpotent_plus, nilpotent_minus, zero };

std::string to_string(OrbitTag t);

template <class T> struct OrbitClass
{
    OrbitTag tag = OrbitTag::zero;
    T delta{};
};

// Exact comparison of delta with zero when tolerance is 0; otherwise
// |delta| <= tolerance counts as the cone.
OrbitClass<double> classify(LieD const &f, double tolerance = 0);
OrbitClass<mpq_class> classify(LieQ const &f);

GroupD exp_map(LieD const &f);
// Partial sums of the matrix power series, an oracle for exp_map.
GroupD exp_series(LieD const &f, int terms = 30);

using cplxd = std::complex<double>;

cplxd mobius(GroupD const &g, cplxd tau);
cplxd omega(LieD const &f);

struct OmegaInverse
{
    LieD element;
    double residual = 0; // |omega(F) - tau|
    int branch = 0;      // +1 or -1; the chosen root of the quadratic in x
};

// Nilpotent F with omega(F) = tau, from the two roots of the quadratic
// satisfied by x; branch 0 selects the root with the smaller |x|.
OmegaInverse omega_inverse_nilpotent(cplxd tau, int branch = 0);

enum class ConeKind { C, D, E };

std::string to_string(ConeKind k);

// Cone sets through a nilpotent anchor F(a, b, c) with c != 0:
// C fixes z = c with x^2 + y^2 = c^2, D fixes y = b with x^2 + b^2 = z^2,
// E fixes x = a with a^2 + y^2 = z^2.
struct ConeSet
{
    ConeKind kind = ConeKind::C;
    LieD anchor;
    int anchor_branch = 0;
    double anchor_residual = 0;
    double anchor_parameter = 0; // circle angle (C) or hyperbola parameter (D, E)
    int anchor_sheet = 1;        // branch of the hyperbola containing the anchor

    // C: angle t; D, E: hyperbola parameter t on the given sheet.
    LieD point(double t, int sheet = 1) const;
};

// Anchor at tau; the branch with c != 0 is used when the default one has c = 0.
std::array<ConeSet, 3> cone_sets_at(cplxd tau);

struct ConeSample
{
    LieD element;
    cplxd image;
    double delta = 0;
};

// The anchor first, then n - 1 seeded random parameters. Hyperbola
// parameters are drawn from [-range, range] on a random sheet.
std::vector<ConeSample> image_sample(ConeSet const &set, std::size_t n, std::uint64_t seed, double range = 2.0);

// Seeded samples of the cone x^2 + y^2 = z^2 with (x, y) uniform in the
// box [-1, 1]^2 and z of the requested sign (0 picks a random sign).
std::vector<ConeSample> sample_cone(std::size_t n, std::uint64_t seed, int sign = 0);

// Points k_theta <tau> with k_theta = [[cos t, sin t], [-sin t, cos t]].
std::vector<cplxd> k_orbit(cplxd tau, std::vector<double> const &angles);

} // namespace ellq
