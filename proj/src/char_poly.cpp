#include "reflect/char_poly.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace reflect {

namespace {

using Rational = boost::multiprecision::cpp_rational;
using Poly = std::vector<BigInt>;
using RPoly = std::vector<Rational>;

Poly times_lambda(const Poly& p) {
  Poly out(p.size() + 1);
  for (std::size_t i = 0; i < p.size(); ++i) out[i + 1] = p[i];
  return out;
}

Poly subtract(Poly a, const Poly& b) {
  if (a.size() < b.size()) a.resize(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
  while (a.size() > 1 && a.back() == 0) a.pop_back();
  return a;
}

void trim(RPoly& p) {
  while (p.size() > 1 && p.back() == 0) p.pop_back();
}

bool is_constant(const RPoly& p) { return p.size() <= 1; }

RPoly to_rational(const Poly& p) { return RPoly(p.begin(), p.end()); }

RPoly derivative(const RPoly& p) {
  if (p.size() <= 1) return {Rational(0)};
  RPoly out(p.size() - 1);
  for (std::size_t i = 1; i < p.size(); ++i) out[i - 1] = p[i] * static_cast<int>(i);
  return out;
}

// Quotient and remainder of a / b.
std::pair<RPoly, RPoly> divide(RPoly a, const RPoly& b) {
  trim(a);
  if (a.size() < b.size()) return {{Rational(0)}, a};
  RPoly q(a.size() - b.size() + 1);
  for (std::size_t k = q.size(); k-- > 0;) {
    q[k] = a[k + b.size() - 1] / b.back();
    for (std::size_t i = 0; i < b.size(); ++i) a[k + i] -= q[k] * b[i];
  }
  a.resize(b.size() > 1 ? b.size() - 1 : 1);
  trim(a);
  return {q, a};
}

RPoly monic(RPoly p) {
  trim(p);
  const Rational lead = p.back();
  for (auto& c : p) c /= lead;
  return p;
}

RPoly gcd(RPoly a, RPoly b) {
  trim(a);
  trim(b);
  while (!(b.size() == 1 && b[0] == 0)) {
    auto r = divide(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return monic(a);
}

// Yun's algorithm: p = prod_i f_i^i with every f_i square-free.
std::vector<std::pair<RPoly, int>> square_free_factors(const RPoly& p) {
  std::vector<std::pair<RPoly, int>> out;
  const RPoly dp = derivative(p);
  RPoly a = gcd(p, dp);
  RPoly b = divide(p, a).first;
  RPoly c = divide(dp, a).first;
  RPoly d = c;
  {
    const RPoly db = derivative(b);
    RPoly diff(std::max(d.size(), db.size()));
    for (std::size_t i = 0; i < d.size(); ++i) diff[i] += d[i];
    for (std::size_t i = 0; i < db.size(); ++i) diff[i] -= db[i];
    d = diff;
    trim(d);
  }
  for (int i = 1; !is_constant(b); ++i) {
    RPoly f = gcd(b, d);
    b = divide(b, f).first;
    c = divide(d, f).first;
    if (!is_constant(f)) out.emplace_back(f, i);
    const RPoly db = derivative(b);
    RPoly diff(std::max(c.size(), db.size()));
    for (std::size_t k = 0; k < c.size(); ++k) diff[k] += c[k];
    for (std::size_t k = 0; k < db.size(); ++k) diff[k] -= db[k];
    d = diff;
    trim(d);
  }
  return out;
}

long double evaluate(const std::vector<long double>& c, long double x, long double* derivative_out) {
  long double value = 0.0L;
  long double slope = 0.0L;
  for (std::size_t k = c.size(); k-- > 0;) {
    slope = slope * x + value;
    value = value * x + c[k];
  }
  if (derivative_out) *derivative_out = slope;
  return value;
}

std::vector<double> square_free_roots(const RPoly& factor) {
  const RPoly f = monic(factor);
  const int n = static_cast<int>(f.size()) - 1;
  std::vector<long double> c(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) c[i] = static_cast<long double>(f[i]);
  if (n == 1) return {static_cast<double>(-c[0])};

  Matrix companion = Matrix::Zero(n, n);
  for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) companion(i, n - 1) = -static_cast<double>(c[i]);
  Eigen::EigenSolver<Matrix> eig(companion, false);

  std::vector<double> roots;
  for (int i = 0; i < n; ++i) {
    const auto z = eig.eigenvalues()(i);
    if (std::abs(z.imag()) > 1e-6 * std::max(1.0, std::abs(z))) throw Error("polynomial has a non-real root");
    long double x = z.real();
    for (int step = 0; step < 8; ++step) {
      long double slope = 0.0L;
      const long double value = evaluate(c, x, &slope);
      if (slope == 0.0L) break;
      const long double next = x - value / slope;
      if (next == x) break;
      x = next;
    }
    roots.push_back(static_cast<double>(x));
  }
  return roots;
}

std::string poly_text(const Poly& ascending) {
  std::ostringstream os;
  bool first = true;
  for (std::size_t k = ascending.size(); k-- > 0;) {
    const BigInt& c = ascending[k];
    if (c == 0) continue;
    const BigInt mag = c < 0 ? BigInt(-c) : c;
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    if (mag != 1 || k == 0) os << mag << (k > 0 ? " " : "");
    if (k >= 1) os << "l";
    if (k >= 2) os << "^" << k;
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

}  // namespace

const char* parity_name(Parity p) {
  switch (p) {
    case Parity::Even:
      return "even";
    case Parity::Odd:
      return "odd";
    case Parity::Neither:
      break;
  }
  return "neither";
}

std::string CharPolynomial::to_string() const { return poly_text(coefficients); }

Parity parity_of(const std::vector<BigInt>& ascending) {
  bool even_terms = false;
  bool odd_terms = false;
  for (std::size_t k = 0; k < ascending.size(); ++k) {
    if (ascending[k] == 0) continue;
    (k % 2 == 0 ? even_terms : odd_terms) = true;
  }
  if (even_terms && odd_terms) return Parity::Neither;
  return odd_terms ? Parity::Odd : Parity::Even;
}

CharPolynomial char_poly_parity(Family family, int ell) {
  int first = 0;
  char name = 'P';
  Poly p0;
  Poly p1;
  switch (family) {
    case Family::A:
      first = 1;
      name = 'P';
      p0 = {0, 1};       // l
      p1 = {-1, 0, 1};   // l^2 - 1
      break;
    case Family::B:
      first = 2;
      name = 'Q';
      p0 = {-2, 0, 1};     // l^2 - 2
      p1 = {0, -3, 0, 1};  // l^3 - 3 l
      break;
    case Family::D:
      first = 3;
      name = 'R';
      p0 = {0, -2, 0, 1};     // l^3 - 2 l
      p1 = {0, 0, -3, 0, 1};  // l^4 - 3 l^2
      break;
    default:
      throw RangeError(std::string("recursion is defined for A, B and D only, got ") + family_letter(family));
  }
  if (ell < first || ell > kMaxRecursionEll) {
    throw RangeError(std::string(1, family_letter(family)) + std::to_string(ell) + " is outside " +
                     std::to_string(first) + ".." + std::to_string(kMaxRecursionEll));
  }

  CharPolynomial out;
  out.family = family;
  out.ell = ell;
  auto label = [&](int l) { return std::string(1, name) + std::to_string(l); };
  out.trace.push_back(label(first) + " = " + poly_text(p0) + " (base)");
  if (ell == first) {
    out.coefficients = p0;
  } else {
    out.trace.push_back(label(first + 1) + " = " + poly_text(p1) + " (base)");
    for (int l = first + 2; l <= ell; ++l) {
      Poly next = subtract(times_lambda(p1), p0);
      p0 = std::move(p1);
      p1 = std::move(next);
      out.trace.push_back(label(l) + " = l " + label(l - 1) + " - " + label(l - 2) + " = " + poly_text(p1));
    }
    out.coefficients = p1;
  }
  out.parity = parity_of(out.coefficients);
  return out;
}

std::vector<double> real_roots(const std::vector<BigInt>& ascending) {
  RPoly p = to_rational(ascending);
  trim(p);
  std::vector<double> roots;
  if (is_constant(p)) return roots;
  for (const auto& [factor, multiplicity] : square_free_factors(p)) {
    for (double r : square_free_roots(factor)) roots.insert(roots.end(), multiplicity, r);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

RootComparison compare_roots(const CharPolynomial& poly) {
  RootComparison out;
  out.roots = real_roots(poly.coefficients);
  const Matrix gram = gram_matrix(coxeter_matrix(NamedFamily{poly.family, poly.ell}));
  const Matrix twice_m = 2.0 * (gram - Matrix::Identity(gram.rows(), gram.cols()));
  const Vector ev = Eigen::SelfAdjointEigenSolver<Matrix>(twice_m, Eigen::EigenvaluesOnly).eigenvalues();
  out.eigenvalues.assign(ev.data(), ev.data() + ev.size());
  if (out.roots.size() != out.eigenvalues.size()) {
    out.max_deviation = std::numeric_limits<double>::infinity();
    return out;
  }
  for (std::size_t i = 0; i < out.roots.size(); ++i) {
    out.max_deviation = std::max(out.max_deviation, std::abs(out.roots[i] - out.eigenvalues[i]));
  }
  return out;
}

}  // namespace reflect
