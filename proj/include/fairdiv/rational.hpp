#pragma once

#include <gmpxx.h>

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace fairdiv {

// Exact rational scalar. mpq_class keeps values canonical (lowest terms,
// positive denominator), which the equality tests throughout rely on.
using Rational = mpq_class;
using Integer = mpz_class;

inline Rational make_rational(long num, long den) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline Rational rational_from_string(const std::string& s) {
  auto slash = s.find('/');
  Rational r;
  if (slash == std::string::npos) {
    r = Rational(s);
  } else {
    r = Rational(s.substr(0, slash)) / Rational(s.substr(slash + 1));
  }
  r.canonicalize();
  return r;
}

// Canonical "p/q" rendering; integers render without the denominator.
inline std::string rational_to_string(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

// b^e for integer e >= 0.
inline Rational rational_pow(const Rational& b, unsigned long e) {
  Rational num, den;
  mpz_pow_ui(num.get_num().get_mpz_t(), b.get_num().get_mpz_t(), e);
  mpz_pow_ui(den.get_num().get_mpz_t(), b.get_den().get_mpz_t(), e);
  Rational r = num / den;
  r.canonicalize();
  return r;
}

using ValueMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;
using RationalMatrix = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;
using RationalVector = Eigen::Matrix<Rational, Eigen::Dynamic, 1>;

}  // namespace fairdiv

namespace Eigen {

template <>
struct NumTraits<mpq_class> : GenericNumTraits<mpq_class> {
  typedef mpq_class Real;
  typedef mpq_class NonInteger;
  typedef mpq_class Nested;

  static inline Real epsilon() { return 0; }
  static inline Real dummy_precision() { return 0; }
  static inline int digits10() { return 0; }

  enum {
    IsInteger = 0,
    IsSigned = 1,
    IsComplex = 0,
    RequireInitialization = 1,
    ReadCost = 6,
    AddCost = 150,
    MulCost = 100
  };
};

}  // namespace Eigen
