#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace thom {

using Rational = mpq_class;
using RVec = std::vector<Rational>;

/// Canonical "p/q" text form (always with a denominator).
std::string to_string(const Rational& q);
/// Accepts "p", "p/q", and signed forms; result is canonicalized.
Rational parse_rational(std::string_view text);
/// Exact conversion of a finite double.
Rational from_double(double x);

inline double to_double(const Rational& q) { return q.get_d(); }
std::vector<double> to_double(const RVec& v);

std::size_t hash_value(const Rational& q);

struct RVecHash {
  std::size_t operator()(const RVec& v) const noexcept;
};

RVec operator+(const RVec& a, const RVec& b);
RVec operator-(const RVec& a, const RVec& b);
RVec operator*(const Rational& s, const RVec& a);
Rational dot(const RVec& a, const RVec& b);
Rational squared_norm(const RVec& a);

/// Representative of x modulo 1 in [0, 1).
Rational reduce_unit(const Rational& x);
/// Representative of d modulo 1 in [-1/2, 1/2).
Rational wrap_half(const Rational& d);

}  // namespace thom
