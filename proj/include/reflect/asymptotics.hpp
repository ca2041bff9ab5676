#pragma once

// Large-rank behaviour of kappa for the A, B, D and I families, and the
// pixel-embedding kernels whose operator norms give the limit constants.

#include "reflect/coxeter.hpp"

#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

namespace reflect {

/// sqrt((1 + cos(pi/m)) / (1 - cos(pi/m))); throws RangeError for m < 3.
double kappa_dihedral_closed_form(long long m);

enum class SolverPath {
  Auto,        // structured
  Structured,  // bidiagonal Cholesky factor + relative-accuracy bisection
  Dense,       // SVD of the full root matrix; cross-check only
};

inline constexpr int kMaxSweepEll = 5000;

/// kappa of A_l, B_l, D_l or I_m. Throws RangeError outside the family's range
/// (l <= 5000 for A, B, D; 3 <= m <= 10^6 for I).
double family_kappa(Family family, int ell, SolverPath path = SolverPath::Auto);

/// Extreme eigenvalues of a unit-diagonal symmetric tridiagonal positive
/// definite matrix with the given off-diagonal, to high relative accuracy.
struct TridiagonalExtremes {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
};
TridiagonalExtremes unit_tridiagonal_extremes(const std::vector<long double>& offdiagonal);

struct SweepPoint {
  int ell = 0;
  double kappa = 0.0;
  double kappa_over_ell = 0.0;
};

struct SweepReport {
  Family family = Family::A;
  std::vector<SweepPoint> points;  // ascending ell
  double limit_constant = 0.0;     // 2/pi for A and I, 4/pi for B and D
  double max_relative_gap_at_tail = 0.0;  // |kappa/l - c| / c at the largest l
};

double limit_constant(Family family);

/// Computes kappa at every requested l (deduplicated, sorted), in parallel.
SweepReport family_sweep(Family family, const std::vector<int>& ells, SolverPath path = SolverPath::Auto);

/// CSV with header "ell,kappa,kappa_over_ell".
void write_sweep_csv(std::ostream& os, const SweepReport& report);

/// "100:1600:x2" (geometric), "3:100" or "3:100:+5" (arithmetic), or a
/// comma-separated list mixing these. Throws ParseError.
std::vector<int> parse_ells(std::string_view text);

enum class KernelId {
  AFamily,          // sqrt(2)(1 - x) for y <= x, -sqrt(2) x for y > x
  VolterraAdjoint,  // sqrt(2) for y >= x, 0 otherwise
};

const char* kernel_name(KernelId id);
double kernel_value(KernelId id, double x, double y);
/// sqrt(2)/pi for the A-family kernel, 2 sqrt(2)/pi for the Volterra adjoint.
double kernel_norm_exact(KernelId id);

/// Piecewise-constant kernel on an n x n grid of cells of width 1/n.
struct DiscreteKernel {
  int n = 0;
  Matrix values;  // kernel value on each cell
  std::optional<KernelId> kernel_id;
  double operator_norm = 0.0;  // L^2 -> L^2 norm of the integral operator
};

/// A^#(x, y) = n A_ij on cell (i, j); its operator norm equals |A|_2.
/// Throws DimensionMismatch for non-square input.
DiscreteKernel pixel_embed(const Matrix& a);

/// Midpoint samples K(x_i, y_j) on the n x n grid.
DiscreteKernel discretize_kernel(KernelId id, int n);

/// L^2([0,1]^2) distance between a piecewise-constant kernel and a limit
/// kernel, by midpoint quadrature on a `sub` x `sub` grid inside each cell.
double l2_distance(const DiscreteKernel& k, KernelId target, int sub = 4);

/// Top singular value of the midpoint discretization scaled by 1/n.
/// Throws RangeError for n < 16.
double kernel_norm_estimate(KernelId id, int n);

/// Relative residual |K K^* g - (2/pi^2) g| / |(2/pi^2) g| for g = sin(pi x)
/// sampled at the midpoints of the A-family kernel's discretization.
double eigenfunction_residual(int n);

/// Bordered factor S (size d+1) with S^T S = diag(Gram(A_d), 1), and its
/// inverse from the closed-form entries.
Matrix bordered_factor(int d);
Matrix bordered_factor_inverse(int d);

/// Root matrix with rows (e_i - e_{i+1})/sqrt(2) and e_d for B_d, and its
/// closed-form inverse (sqrt(2) on and above the diagonal, last column 1).
Matrix b_family_standard_roots(int d);
Matrix b_family_standard_dual(int d);

}  // namespace reflect
