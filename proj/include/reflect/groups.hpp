#pragma once

// Explicit matrix realizations of reflection groups and the chamber
// representative map rep: R^d / G -> closed chamber.

#include "reflect/coxeter.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

namespace reflect {

/// R(u) = I - 2 u u^T / |u|^2. Throws DegenerateVector when |u| <= 1e-12.
Matrix reflection_matrix(const Vector& u);

struct RealizedGroup {
  FundamentalSystem fs;
  std::vector<Matrix> generators;              // R(alpha_i) for each root row
  std::optional<std::vector<Matrix>> elements;  // present only after a successful enumeration
  std::optional<std::uint64_t> order;
  bool overflow = false;  // enumeration stopped at the cap

  int dimension() const { return fs.dimension(); }
};

/// Generators only; no enumeration.
RealizedGroup realize(const FundamentalSystem& fs);

/// Breadth-first closure under right multiplication by generators, with
/// matrices identified when their max-entry difference is below 1e-8.
/// When more than `cap` elements appear the result carries no elements and
/// `overflow` is set.
RealizedGroup enumerate_group(const FundamentalSystem& fs, std::size_t cap = kDefaultEnumerationCap);

struct ChamberPoint {
  Vector x;                  // rep(G.x)
  std::vector<int> witness;  // generator indices in the order applied
};

/// Greedy descent: while some root has <alpha_i, x> < -1e-9, reflect in the
/// most negative one (lowest index on ties). Throws IterationLimit after
/// 10 * |G| steps (or 10^7 when the order is unknown).
ChamberPoint chamber_rep(const Vector& x, const FundamentalSystem& fs);

/// Shorthand for chamber_rep(x, fs).x
Vector rep(const Vector& x, const FundamentalSystem& fs);

/// True when roots * x >= -tol on every root row.
bool in_closed_chamber(const Vector& x, const FundamentalSystem& fs, double tol = tol::cone);

/// Interior point dual * 1 (every root row evaluates to 1).
Vector chamber_interior_point(const FundamentalSystem& fs);

/// {g x : g in G}, deduplicated at 1e-8. Throws ElementsUnavailable when the
/// group was not enumerated.
std::vector<Vector> orbit(const Vector& x, const RealizedGroup& g);

/// Element dumps: one d x d matrix per record, row-major. The binary form is
/// little-endian IEEE-754 binary64 with no header.
void write_elements_binary(std::ostream& os, const RealizedGroup& g);
void write_elements_csv(std::ostream& os, const RealizedGroup& g);
std::vector<Matrix> read_elements_binary(std::istream& is, int dimension);

}  // namespace reflect
