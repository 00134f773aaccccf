#pragma once

#include <stdexcept>

namespace ellq
{

// Raised for inputs outside a mathematical domain: singular curves, points
// off the curve, invalid discriminants and the like.
class domain_error : public std::domain_error
{
  public:
    using std::domain_error::domain_error;
};

} // namespace ellq
