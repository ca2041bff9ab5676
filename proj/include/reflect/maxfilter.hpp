#pragma once

// Max filtering <<G.x, G.y>> = sup over orbits of <p, q>, filter banks built
// from it, and empirical bilipschitz probes.

#include "reflect/groups.hpp"

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

namespace reflect {

enum class Backend {
  ChamberRep,       // <rep(x), rep(y)>
  OrbitBruteForce,  // max over enumerated g of <g x, y>; test oracle
};

double maxfilter_inner(const Vector& x, const Vector& y, const FundamentalSystem& fs);

/// Throws ElementsUnavailable for OrbitBruteForce on a group without elements.
double maxfilter_inner(const Vector& x, const Vector& y, const RealizedGroup& g, Backend backend);

struct MaxFilterBank {
  FundamentalSystem fs;
  std::vector<Vector> templates;
  std::vector<Vector> reps;  // rep(G.t_i)

  std::size_t size() const { return templates.size(); }
  int dimension() const { return fs.dimension(); }
  /// Linear map L with rows rep(t_i); Phi = L o rep.
  Matrix linearized() const;
};

MaxFilterBank make_bank(const FundamentalSystem& fs, std::vector<Vector> templates);
/// Templates taken from the columns of `columns`.
MaxFilterBank make_bank(const FundamentalSystem& fs, const Matrix& columns);

/// Phi(G.x)_i = <rep(t_i), rep(x)>.
Vector filter_bank_apply(const MaxFilterBank& bank, const Vector& x);

struct QuotientSample {
  bool directed = false;
  double quotient = 0.0;
};

struct LipschitzEstimate {
  double lower = 0.0;
  double upper = 0.0;
  std::size_t samples = 0;
  std::pair<Vector, Vector> argmin_pair;
  std::pair<Vector, Vector> argmax_pair;
  std::vector<QuotientSample> quotients;
  // Singular values of the linearized map, the exact Lipschitz bounds.
  double sigma_min = 0.0;
  double sigma_max = 0.0;
};

/// Difference quotients |Phi x - Phi y| / |rep x - rep y| over n_samples pairs.
/// Even-indexed pairs are independent uniform points on the unit sphere. Odd
/// pairs are directed: y = dual * w with w_i ~ U(0.5, 1.5) on root rows
/// (normal on trivial rows), normalized, and x = y + 1e-3 v where v alternates
/// between the top and bottom right-singular vectors of the linearized map.
/// Pairs with denominator below 1e-12 are skipped.
LipschitzEstimate empirical_lipschitz(const MaxFilterBank& bank, std::size_t n_samples, std::uint64_t seed);

/// Templates as rows, with header t0,t1,...
void write_bank_csv(std::ostream& os, const MaxFilterBank& bank);

/// CSV with header "index,kind,quotient".
void write_quotients_csv(std::ostream& os, const LipschitzEstimate& est);

}  // namespace reflect
