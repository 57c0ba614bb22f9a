#include "thomjiggle/rational.hpp"

#include <cmath>
#include <functional>

#include "thomjiggle/errors.hpp"

namespace thom {

std::string to_string(const Rational& q) {
  Rational c(q);
  c.canonicalize();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw SchemaViolation("empty rational literal");
  Rational q;
  if (q.set_str(s, 10) != 0) throw SchemaViolation("malformed rational '" + s + "'");
  if (q.get_den() == 0) throw SchemaViolation("zero denominator in '" + s + "'");
  q.canonicalize();
  return q;
}

Rational from_double(double x) {
  if (!std::isfinite(x)) throw InvalidParams("non-finite value cannot be made rational");
  return Rational(x);
}

std::vector<double> to_double(const RVec& v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& q : v) out.push_back(q.get_d());
  return out;
}

static std::size_t hash_mpz(mpz_srcptr z) {
  std::size_t h = static_cast<std::size_t>(mpz_sgn(z)) * 0x9e3779b97f4a7c15ULL;
  const std::size_t limbs = mpz_size(z);
  for (std::size_t i = 0; i < limbs; ++i) {
    h ^= std::hash<mp_limb_t>{}(mpz_getlimbn(z, static_cast<mp_size_t>(i))) + 0x9e3779b97f4a7c15ULL +
         (h << 6) + (h >> 2);
  }
  return h;
}

std::size_t hash_value(const Rational& q) {
  std::size_t h = hash_mpz(q.get_num_mpz_t());
  return h ^ (hash_mpz(q.get_den_mpz_t()) + 0x7f4a7c15ULL + (h << 6) + (h >> 2));
}

std::size_t RVecHash::operator()(const RVec& v) const noexcept {
  std::size_t h = v.size();
  for (const auto& q : v) h ^= hash_value(q) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

RVec operator+(const RVec& a, const RVec& b) {
  RVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

RVec operator-(const RVec& a, const RVec& b) {
  RVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

RVec operator*(const Rational& s, const RVec& a) {
  RVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = s * a[i];
  return out;
}

Rational dot(const RVec& a, const RVec& b) {
  Rational acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

Rational squared_norm(const RVec& a) { return dot(a, a); }

Rational reduce_unit(const Rational& x) {
  mpz_class fl;
  mpz_fdiv_q(fl.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  Rational r = x - Rational(fl);
  return r;
}

Rational wrap_half(const Rational& d) {
  Rational r = reduce_unit(d + Rational(1, 2)) - Rational(1, 2);
  return r;
}

}  // namespace thom
