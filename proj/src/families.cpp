#include "ellq/families.hpp"

#include <algorithm>
#include <charconv>

#include "ellq/l_series.hpp"
#include "ellq/local_data.hpp"
#include "ellq/numtheory.hpp"
#include "ellq/parallel.hpp"
#include "ellq/torsion.hpp"

namespace ellq
{

bool is_family_member(mpz_class const &A, mpz_class const &B)
{
    mpz_class d = 4 * A * A * A + 27 * B * B;
    if (d == 0)
        return false;
    for (auto const &[p, e] : factor(gcd(A, B))) {
        mpz_class p4 = p * p * p * p, p6 = p4 * p * p;
        if (mpz_divisible_p(A.get_mpz_t(), p4.get_mpz_t()) && mpz_divisible_p(B.get_mpz_t(), p6.get_mpz_t()))
            return false;
    }
    return true;
}

FamilySlice enumerate_family(std::uint64_t X)
{
    if (X < 4)
        throw domain_error("enumerate_family: X must be at least 4");
    FamilySlice out{X, {}};
    mpz_class bound(std::to_string(X));
    long amax = 0;
    while (4 * mpz_class(amax + 1) * (amax + 1) * (amax + 1) < bound)
        ++amax;
    long bmax = 0;
    while (27 * mpz_class(bmax + 1) * (bmax + 1) < bound)
        ++bmax;
    for (long a = -amax; a <= amax; ++a)
        for (long b = -bmax; b <= bmax; ++b) {
            mpz_class A(a), B(b);
            if (is_family_member(A, B))
                out.curves.push_back(Curve::short_weierstrass(A, B));
        }
    return out;
}

std::vector<double> evaluate(FamilySlice const &slice, Functional const &phi, unsigned jobs)
{
    std::vector<double> values(slice.curves.size());
    parallel_for(values.size(), jobs, [&](std::size_t i) { values[i] = phi(slice.curves[i]); });
    return values;
}

double average(FamilySlice const &slice, Functional const &phi, unsigned jobs)
{
    if (slice.curves.empty())
        throw domain_error("average: empty family slice");
    double sum = 0;
    for (double v : evaluate(slice, phi, jobs))
        sum += v;
    return sum / static_cast<double>(slice.curves.size());
}

double prob(FamilySlice const &slice, Predicate const &pred, unsigned jobs)
{
    return average(slice, [&](Curve const &E) { return pred(E) ? 1.0 : 0.0; }, jobs);
}

std::vector<AveragePoint> average_sequence(std::vector<std::uint64_t> const &cutoffs, Functional const &phi,
                                           unsigned jobs)
{
    if (cutoffs.empty())
        return {};
    std::uint64_t top = *std::max_element(cutoffs.begin(), cutoffs.end());
    FamilySlice slice = enumerate_family(top);
    std::vector<double> values = evaluate(slice, phi, jobs);
    std::vector<AveragePoint> out;
    for (std::uint64_t X : cutoffs) {
        mpz_class bound(std::to_string(X));
        AveragePoint pt{X, 0, 0};
        for (std::size_t i = 0; i < slice.curves.size(); ++i)
            if (curve_height(slice.curves[i]) < bound) {
                ++pt.count;
                pt.value += values[i];
            }
        if (pt.count == 0)
            throw domain_error("average_sequence: empty family slice");
        pt.value /= static_cast<double>(pt.count);
        out.push_back(pt);
    }
    return out;
}

FamilyStat parse_family_stat(std::string const &spec, std::uint64_t xmax)
{
    if (spec == "torsion")
        return {spec, [](Curve const &E) { return static_cast<double>(torsion_subgroup(E).order()); }};
    if (spec == "slope")
        return {spec, [xmax](Curve const &E) { return bsd_product(E, xmax).slope; }};
    if (spec.rfind("ap:", 0) == 0) {
        std::uint64_t p = 0;
        auto tail = std::string_view(spec).substr(3);
        auto [ptr, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), p);
        if (ec != std::errc() || ptr != tail.data() + tail.size() || !is_prime(p))
            throw domain_error("family stat: ap:<p> needs a prime p");
        return {spec, [p](Curve const &E) { return static_cast<double>(reduction_type(E, p).ap); }};
    }
    throw domain_error("family stat must be torsion, ap:<p> or slope");
}

} // namespace ellq
