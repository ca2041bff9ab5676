#pragma once

// Exact characteristic polynomials det(lambda I - 2M) for the A, B and D
// families via the three-term recursion P_l = lambda P_{l-1} - P_{l-2}.

#include "reflect/coxeter.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <vector>

namespace reflect {

using BigInt = boost::multiprecision::cpp_int;

enum class Parity { Even, Odd, Neither };

const char* parity_name(Parity p);

struct CharPolynomial {
  Family family = Family::A;
  int ell = 1;
  std::vector<BigInt> coefficients;  // ascending powers of lambda
  Parity parity = Parity::Neither;
  std::vector<std::string> trace;  // one line per recursion step

  int degree() const { return static_cast<int>(coefficients.size()) - 1; }
  /// e.g. "l^3 - 3 l"
  std::string to_string() const;
};

inline constexpr int kMaxRecursionEll = 64;

/// Throws RangeError unless family is A (l >= 1), B (l >= 2) or D (l >= 3)
/// and l <= 64.
CharPolynomial char_poly_parity(Family family, int ell);

Parity parity_of(const std::vector<BigInt>& ascending);

/// Real roots with multiplicity, ascending. Square-free factorization over
/// the rationals, then companion-matrix eigenvalues polished by Newton steps.
/// Throws Error if a root is not real (never the case for these families).
std::vector<double> real_roots(const std::vector<BigInt>& ascending);

struct RootComparison {
  std::vector<double> roots;        // polynomial roots, ascending
  std::vector<double> eigenvalues;  // eigenvalues of 2M, ascending
  double max_deviation = 0.0;
};

/// Compares the polynomial's roots with a direct eigensolve of 2(Gram - I).
RootComparison compare_roots(const CharPolynomial& poly);

}  // namespace reflect
