#pragma once
// Exact rationals for coefficient tables.

#include <boost/rational.hpp>
#include <string>

namespace ckp {

using Rational = boost::rational<long long>;

// canonical "p/q" (q >= 1, always printed)
inline std::string to_string(const Rational& r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}
inline double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

}  // namespace ckp
