#pragma once

// Hand-rolled generators for property tests.

#include "reflect/coxeter.hpp"

#include <random>
#include <vector>

namespace testing {

using reflect::Atom;
using reflect::Family;
using reflect::Matrix;
using reflect::NamedFamily;
using reflect::Vector;

inline Vector gaussian(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> normal;
  Vector v(d);
  for (int i = 0; i < d; ++i) v(i) = normal(rng);
  return v;
}

inline Matrix random_orthogonal(std::mt19937_64& rng, int d) {
  Matrix g(d, d);
  for (int j = 0; j < d; ++j) g.col(j) = gaussian(rng, d);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  // Fix column signs so the distribution is Haar.
  for (int j = 0; j < d; ++j) {
    if (qr.matrixQR()(j, j) < 0) q.col(j) *= -1.0;
  }
  return q;
}

// Essential irreducible named atoms with d <= 8.
inline std::vector<Atom> small_atoms() {
  std::vector<Atom> out;
  for (int l = 1; l <= 8; ++l) out.push_back(NamedFamily{Family::A, l});
  for (int l = 2; l <= 8; ++l) out.push_back(NamedFamily{Family::B, l});
  for (int l = 4; l <= 8; ++l) out.push_back(NamedFamily{Family::D, l});
  for (int l = 6; l <= 8; ++l) out.push_back(NamedFamily{Family::E, l});
  out.push_back(NamedFamily{Family::F, 4});
  out.push_back(NamedFamily{Family::H, 3});
  out.push_back(NamedFamily{Family::H, 4});
  for (int m = 3; m <= 12; ++m) out.push_back(NamedFamily{Family::I, m});
  return out;
}

inline Atom random_atom(std::mt19937_64& rng, bool allow_trivial = true) {
  const auto atoms = small_atoms();
  std::uniform_int_distribution<std::size_t> pick(0, atoms.size() + (allow_trivial ? 2 : 0) - 1);
  const std::size_t k = pick(rng);
  if (k >= atoms.size()) return reflect::Trivial{static_cast<int>(k - atoms.size()) + 1};
  return atoms[k];
}

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace testing
