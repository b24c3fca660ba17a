#pragma once

#include <iterator>

// Eigen 3.4 dense expressions expose `const_iterator = void`; Boost.Multiprecision
// probes iterator_traits on it when checking for byte containers.
template <>
struct std::iterator_traits<void> {
  using value_type = void;
};

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/eigen.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace fanocpx {

namespace mp = boost::multiprecision;

using Integer = mp::number<mp::cpp_int_backend<>, mp::et_off>;
using Rational = mp::number<mp::rational_adaptor<mp::cpp_int_backend<>>, mp::et_off>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using IntMatrix = Matrix<Integer>;
using IntVector = Vector<Integer>;
using RatMatrix = Matrix<Rational>;
using RatVector = Vector<Rational>;

inline Integer abs(const Integer& a) { return a < 0 ? Integer(-a) : a; }
inline Integer gcd(const Integer& a, const Integer& b) { return mp::gcd(a, b); }
inline Integer lcm(const Integer& a, const Integer& b) {
  if (a == 0 || b == 0) return 0;
  return abs(a / gcd(a, b) * b);
}
inline Integer numer(const Rational& q) { return mp::numerator(q); }
inline Integer denom(const Rational& q) { return mp::denominator(q); }

// floor and ceiling of a rational, exact
inline Integer floor_q(const Rational& q) {
  Integer n = numer(q), d = denom(q);
  Integer f = n / d;
  if (n % d != 0 && n < 0) f -= 1;
  return f;
}
inline Integer ceil_q(const Rational& q) { return -floor_q(Rational(-q)); }

// floor division with positive divisor
inline Integer floor_div(const Integer& a, const Integer& b) {
  Integer q = a / b;
  if (a % b != 0 && ((a < 0) != (b < 0))) q -= 1;
  return q;
}
inline Integer mod_pos(const Integer& a, const Integer& b) {
  Integer r = a % b;
  if (r < 0) r += abs(b);
  return r;
}

inline bool fits_int64(const Integer& a) {
  return a <= Integer(INT64_MAX) && a >= Integer(INT64_MIN);
}
inline std::int64_t to_i64(const Integer& a) { return a.convert_to<std::int64_t>(); }

template <typename S>
Matrix<S> zeros(Eigen::Index r, Eigen::Index c) {
  Matrix<S> m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = S(0);
  return m;
}
template <typename S>
Vector<S> zero_vector(Eigen::Index n) {
  Vector<S> v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = S(0);
  return v;
}
template <typename S>
Matrix<S> identity(Eigen::Index n) {
  Matrix<S> m = zeros<S>(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = S(1);
  return m;
}

inline RatVector to_rational(const IntVector& v) { return v.cast<Rational>(); }
inline RatMatrix to_rational(const IntMatrix& m) { return m.cast<Rational>(); }

// Scales a rational vector to the primitive integer vector on the same ray.
IntVector primitive(const RatVector& v);
IntVector primitive(const IntVector& v);
Integer content(const IntVector& v);

bool lex_less(const IntVector& a, const IntVector& b);
bool lex_less(const RatVector& a, const RatVector& b);
bool is_zero(const IntVector& v);
bool is_zero(const RatVector& v);
Integer dot(const IntVector& a, const IntVector& b);
Rational dot(const RatVector& a, const RatVector& b);

IntVector int_vector(std::initializer_list<long long> xs);
RatVector rat_vector(std::initializer_list<Rational> xs);
IntMatrix int_matrix(std::initializer_list<std::initializer_list<long long>> rows);

std::string to_string(const Integer& a);
std::string to_string(const Rational& q);
std::string to_string(const IntVector& v);
std::string to_string(const RatVector& v);
std::string to_string(const IntMatrix& m);

}  // namespace fanocpx
