#include "reflect/asymptotics.hpp"

#include "reflect/conditioning.hpp"
#include "reflect/parallel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <set>
#include <string>

namespace reflect {

namespace {

constexpr long double kPi = std::numbers::pi_v<long double>;
constexpr int kMaxDihedral = 1'000'000;

// Number of eigenvalues below x of the symmetric tridiagonal matrix with zero
// diagonal and off-diagonal b.
std::size_t count_below(const std::vector<long double>& b, long double x) {
  const long double tiny = std::numeric_limits<long double>::min();
  std::size_t count = 0;
  long double q = -x;
  if (q < 0) ++count;
  for (long double bk : b) {
    if (q == 0) q = -tiny;
    q = -x - bk * bk / q;
    if (q < 0) ++count;
  }
  return count;
}

// Smallest x in [lo, hi] with count_below(x) >= target.
long double bisect(const std::vector<long double>& b, std::size_t target, long double lo, long double hi) {
  for (int iter = 0; iter < 400; ++iter) {
    const long double mid = lo + (hi - lo) / 2;
    if (mid <= lo || mid >= hi) break;
    (count_below(b, mid) >= target ? hi : lo) = mid;
  }
  return hi;
}

struct SingularPair {
  long double max;
  long double min;
};

// Singular values of the lower bidiagonal Cholesky factor of the unit-diagonal
// tridiagonal matrix, via the Golub-Kahan form.
SingularPair bidiagonal_extremes(const std::vector<long double>& offdiagonal) {
  const std::size_t n = offdiagonal.size() + 1;
  std::vector<long double> gk;
  gk.reserve(2 * n - 1);
  long double pivot = 1.0L;
  gk.push_back(pivot);
  for (long double e : offdiagonal) {
    const long double sub = e / pivot;
    const long double next = 1.0L - sub * sub;
    if (!(next > 0)) throw NotFiniteGroup("tridiagonal Gram matrix is not positive definite");
    pivot = std::sqrt(next);
    gk.push_back(sub);
    gk.push_back(pivot);
  }
  long double bound = 0.0L;
  for (std::size_t k = 0; k < gk.size(); ++k) {
    const long double left = k > 0 ? std::abs(gk[k - 1]) : 0.0L;
    bound = std::max(bound, left + std::abs(gk[k]));
  }
  bound = std::max(bound, std::abs(gk.back())) * 1.01L + 1e-30L;
  return {bisect(gk, 2 * n, 0.0L, bound), bisect(gk, n + 1, 0.0L, bound)};
}

std::vector<long double> family_offdiagonal(Family family, int ell) {
  const long double half = -0.5L;
  std::vector<long double> off;
  switch (family) {
    case Family::A:
      off.assign(static_cast<std::size_t>(ell - 1), half);
      break;
    case Family::B:
      off.assign(static_cast<std::size_t>(ell - 2), half);
      off.push_back(-std::cos(kPi / 4));
      break;
    case Family::D:
      // (e_{l-1} +- e_l)/sqrt(2) split off the eigenvalue 1; the rest is B_{l-1}.
      return family_offdiagonal(Family::B, ell - 1);
    case Family::I:
      off.push_back(-std::cos(kPi / static_cast<long double>(ell)));
      break;
    default:
      throw RangeError("no tridiagonal form for this family");
  }
  return off;
}

void check_family_range(Family family, int ell) {
  int lo = 0;
  int hi = kMaxSweepEll;
  switch (family) {
    case Family::A:
      lo = 1;
      break;
    case Family::B:
      lo = 2;
      break;
    case Family::D:
      lo = 3;
      break;
    case Family::I:
      lo = 3;
      hi = kMaxDihedral;
      break;
    default:
      throw RangeError(std::string("sweeps cover A, B, D and I, got ") + family_letter(family));
  }
  if (ell < lo || ell > hi) {
    throw RangeError(std::string(1, family_letter(family)) + std::to_string(ell) + " is outside " +
                     std::to_string(lo) + ".." + std::to_string(hi));
  }
}

double top_singular_value(const Matrix& m) {
  Vector v = Vector::Ones(m.cols()).normalized();
  double previous = 0.0;
  for (int iter = 0; iter < 5000; ++iter) {
    Vector w = m.transpose() * (m * v);
    const double estimate = w.norm();
    if (estimate == 0.0) return 0.0;
    v = w / estimate;
    if (std::abs(estimate - previous) <= 1e-14 * estimate) return std::sqrt(estimate);
    previous = estimate;
  }
  return std::sqrt(previous);
}

double midpoint(int i, int n) { return (i + 0.5) / n; }

int parse_int(std::string_view s, std::string_view whole) {
  int value = 0;
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || s.empty()) {
    throw ParseError("expected an integer in '" + std::string(whole) + "'", static_cast<std::size_t>(first - whole.data()));
  }
  return value;
}

}  // namespace

double kappa_dihedral_closed_form(long long m) {
  if (m < 3) throw RangeError("dihedral order must be at least 3");
  const long double c = std::cos(kPi / static_cast<long double>(m));
  return static_cast<double>(std::sqrt((1.0L + c) / (1.0L - c)));
}

TridiagonalExtremes unit_tridiagonal_extremes(const std::vector<long double>& offdiagonal) {
  if (offdiagonal.empty()) return {1.0, 1.0};
  const SingularPair s = bidiagonal_extremes(offdiagonal);
  return {static_cast<double>(s.min * s.min), static_cast<double>(s.max * s.max)};
}

double family_kappa(Family family, int ell, SolverPath path) {
  check_family_range(family, ell);
  if (path == SolverPath::Dense) {
    const Matrix roots = fundamental_system(GroupSpec{{NamedFamily{family, ell}}}).roots;
    const SingularExtremes s = singular_extremes(roots);
    return s.max / s.min;
  }
  const auto off = family_offdiagonal(family, ell);
  if (off.empty()) return 1.0;
  const SingularPair s = bidiagonal_extremes(off);
  return static_cast<double>(s.max / s.min);
}

double limit_constant(Family family) {
  const double two_over_pi = 2.0 / std::numbers::pi;
  return family == Family::B || family == Family::D ? 2.0 * two_over_pi : two_over_pi;
}

SweepReport family_sweep(Family family, const std::vector<int>& ells, SolverPath path) {
  const std::set<int> unique(ells.begin(), ells.end());
  if (unique.empty()) throw RangeError("no ell values given");
  for (int ell : unique) check_family_range(family, ell);

  SweepReport report;
  report.family = family;
  report.limit_constant = limit_constant(family);
  report.points.resize(unique.size());
  const std::vector<int> sorted(unique.begin(), unique.end());
  parallel_for(sorted.size(), [&](std::size_t i) {
    const int ell = sorted[i];
    const double kappa = family_kappa(family, ell, path);
    report.points[i] = {ell, kappa, kappa / ell};
  });
  const SweepPoint& tail = report.points.back();
  report.max_relative_gap_at_tail = std::abs(tail.kappa_over_ell - report.limit_constant) / report.limit_constant;
  return report;
}

void write_sweep_csv(std::ostream& os, const SweepReport& report) {
  os << "ell,kappa,kappa_over_ell\n" << std::setprecision(17);
  for (const auto& p : report.points) os << p.ell << ',' << p.kappa << ',' << p.kappa_over_ell << '\n';
}

std::vector<int> parse_ells(std::string_view text) {
  std::vector<int> out;
  std::size_t start = 0;
  if (text.find_first_not_of(" \t,") == std::string_view::npos) throw ParseError("empty ell list", 0);
  while (start <= text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view item = text.substr(start, end - start);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    const std::size_t position = static_cast<std::size_t>(item.data() - text.data());
    if (item.empty()) throw ParseError("empty entry in ell list", position);

    const std::size_t c1 = item.find(':');
    if (c1 == std::string_view::npos) {
      out.push_back(parse_int(item, text));
    } else {
      const std::size_t c2 = item.find(':', c1 + 1);
      const int lo = parse_int(item.substr(0, c1), text);
      const int hi = parse_int(item.substr(c1 + 1, c2 == std::string_view::npos ? std::string_view::npos : c2 - c1 - 1),
                               text);
      if (hi < lo) throw ParseError("range end is below its start", position);
      std::string_view step = c2 == std::string_view::npos ? std::string_view("+1") : item.substr(c2 + 1);
      if (step.size() < 2 || (step[0] != 'x' && step[0] != '+')) {
        throw ParseError("range step must look like x2 or +5", position);
      }
      const int factor = parse_int(step.substr(1), text);
      if (step[0] == 'x') {
        if (factor < 2 || lo < 1) throw ParseError("geometric ranges need a factor >= 2 and a positive start", position);
        for (long long v = lo; v <= hi; v *= factor) out.push_back(static_cast<int>(v));
      } else {
        if (factor < 1) throw ParseError("arithmetic step must be positive", position);
        for (long long v = lo; v <= hi; v += factor) out.push_back(static_cast<int>(v));
      }
    }
    start = end + 1;
  }
  return out;
}

const char* kernel_name(KernelId id) { return id == KernelId::AFamily ? "a-family" : "volterra-adjoint"; }

double kernel_value(KernelId id, double x, double y) {
  const double r2 = std::numbers::sqrt2;
  if (id == KernelId::AFamily) return y <= x ? r2 * (1.0 - x) : -r2 * x;
  return y >= x ? r2 : 0.0;
}

double kernel_norm_exact(KernelId id) {
  const double base = std::numbers::sqrt2 / std::numbers::pi;
  return id == KernelId::AFamily ? base : 2.0 * base;
}

DiscreteKernel pixel_embed(const Matrix& a) {
  if (a.rows() != a.cols()) throw DimensionMismatch("pixel embedding needs a square matrix");
  if (a.rows() == 0) throw DimensionMismatch("pixel embedding needs a nonempty matrix");
  DiscreteKernel k;
  k.n = static_cast<int>(a.rows());
  k.values = static_cast<double>(k.n) * a;
  k.operator_norm = Eigen::BDCSVD<Matrix>(a).singularValues()(0);
  return k;
}

DiscreteKernel discretize_kernel(KernelId id, int n) {
  if (n < 1) throw RangeError("grid size must be positive");
  DiscreteKernel k;
  k.n = n;
  k.kernel_id = id;
  k.values.resize(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) k.values(i, j) = kernel_value(id, midpoint(i, n), midpoint(j, n));
  }
  k.operator_norm = top_singular_value(k.values / n);
  return k;
}

double l2_distance(const DiscreteKernel& k, KernelId target, int sub) {
  if (sub < 1) throw RangeError("quadrature refinement must be positive");
  const int n = k.n;
  const int fine = n * sub;
  long double total = 0.0L;
  for (int i = 0; i < fine; ++i) {
    const double x = midpoint(i, fine);
    for (int j = 0; j < fine; ++j) {
      const double diff = k.values(i / sub, j / sub) - kernel_value(target, x, midpoint(j, fine));
      total += static_cast<long double>(diff) * diff;
    }
  }
  return static_cast<double>(std::sqrt(total) / fine);
}

double kernel_norm_estimate(KernelId id, int n) {
  if (n < 16) throw RangeError("kernel discretization needs n >= 16");
  return discretize_kernel(id, n).operator_norm;
}

double eigenfunction_residual(int n) {
  if (n < 16) throw RangeError("kernel discretization needs n >= 16");
  const Matrix k = discretize_kernel(KernelId::AFamily, n).values / n;
  Vector g(n);
  for (int i = 0; i < n; ++i) g(i) = std::sin(std::numbers::pi * midpoint(i, n));
  const Vector expected = (2.0 / (std::numbers::pi * std::numbers::pi)) * g;
  const Vector actual = k * (k.transpose() * g);
  return (actual - expected).norm() / expected.norm();
}

Matrix bordered_factor(int d) {
  if (d < 1) throw RangeError("bordered factor needs d >= 1");
  const double r = 1.0 / std::numbers::sqrt2;
  Matrix s = Matrix::Zero(d + 1, d + 1);
  for (int j = 0; j < d; ++j) {
    s(j, j) = r;
    s(j + 1, j) = -r;
  }
  s.col(d).setConstant(1.0 / std::sqrt(static_cast<double>(d + 1)));
  return s;
}

Matrix bordered_factor_inverse(int d) {
  if (d < 1) throw RangeError("bordered factor needs d >= 1");
  const double r2 = std::numbers::sqrt2;
  const double n = d + 1;
  Matrix s(d + 1, d + 1);
  for (int i = 1; i <= d + 1; ++i) {
    for (int j = 1; j <= d + 1; ++j) {
      double v;
      if (i == d + 1) {
        v = 1.0 / std::sqrt(n);
      } else if (j <= i) {
        v = r2 * (1.0 - i / n);
      } else {
        v = -r2 * i / n;
      }
      s(i - 1, j - 1) = v;
    }
  }
  return s;
}

Matrix b_family_standard_roots(int d) {
  if (d < 2) throw RangeError("B family needs d >= 2");
  const double r = 1.0 / std::numbers::sqrt2;
  Matrix a = Matrix::Zero(d, d);
  for (int i = 0; i + 1 < d; ++i) {
    a(i, i) = r;
    a(i, i + 1) = -r;
  }
  a(d - 1, d - 1) = 1.0;
  return a;
}

Matrix b_family_standard_dual(int d) {
  if (d < 2) throw RangeError("B family needs d >= 2");
  Matrix b = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = i; j + 1 < d; ++j) b(i, j) = std::numbers::sqrt2;
    b(i, d - 1) = 1.0;
  }
  return b;
}

}  // namespace reflect
