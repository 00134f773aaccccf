#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ellq/curve.hpp"

namespace ellq
{

struct RegistryEntry
{
    std::string name;
    Curve curve = Curve::short_weierstrass(0, 1);
    std::optional<long long> conductor;
    int epsilon = 0; // 0 when unknown
    std::vector<Point> generators;
    // For twist entries: the base model and the twisting discriminant.
    std::optional<Curve> base;
    long long twist = 1;
};

// Plain-text records, one per line:
//   name: a1,a2,a3,a4,a6; N=<int>; eps=<+1|-1>; gens=(x,y) (x,y); twist=<D>
// Blank lines and lines starting with '#' are ignored.
class Registry
{
  public:
    static Registry parse(std::string_view text);
    static Registry load(std::string const &path);
    static Registry const &builtin();

    std::vector<RegistryEntry> const &entries() const { return entries_; }
    RegistryEntry const *find(std::string_view name) const;
    // Entry whose curve equals E, or equals the minimal model of E.
    RegistryEntry const *find_curve(Curve const &E) const;

  private:
    std::vector<RegistryEntry> entries_;
};

// "A,B", "a1,a2,a3,a4,a6" or "@name".
Curve parse_curve(std::string_view spec, Registry const &registry = Registry::builtin());

} // namespace ellq
