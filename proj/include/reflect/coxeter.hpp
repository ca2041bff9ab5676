#pragma once

// Coxeter data: group specifications, Coxeter matrices, Gram matrices and
// fundamental systems obtained by Cholesky factorization.
//
// Node orderings (fixed, so root matrices are reproducible):
//   A_l  path 1-2-...-l, every edge labeled 3
//   B_l  path 1-...-l, edge (l-1, l) labeled 4
//   D_l  path 1-...-(l-1), node l attached to node l-2
//   E_l  path 1-...-(l-1), node l attached to node 3
//   F_4  path 1-2-3-4, edge (2, 3) labeled 4
//   H_l  path 1-...-l, edge (1, 2) labeled 5
//   I_m  single edge labeled m

#include "reflect/common.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace reflect {

enum class Family { A, B, D, E, F, H, I };

char family_letter(Family f);

/// Symmetric integer matrix of orders m_ij; m_ii = 1 and m_ij >= 2 off the diagonal.
class CoxeterMatrix {
 public:
  /// Validates the entries; throws RangeError on violations.
  explicit CoxeterMatrix(Eigen::MatrixXi orders);

  /// Rank-2 matrix for I_m; named dihedral orders are not subject to the
  /// explicit-diagram cap.
  static CoxeterMatrix dihedral(int m);

  int rank() const { return static_cast<int>(orders_.rows()); }
  int operator()(int i, int j) const { return orders_(i, j); }
  const Eigen::MatrixXi& orders() const { return orders_; }

  /// Connected Coxeter diagram (edges where m_ij >= 3).
  bool irreducible() const;

  friend bool operator==(const CoxeterMatrix& a, const CoxeterMatrix& b) {
    return a.orders_.rows() == b.orders_.rows() && a.orders_ == b.orders_;
  }

 private:
  struct Unchecked {};
  CoxeterMatrix(Eigen::MatrixXi orders, Unchecked) : orders_(std::move(orders)) {}

  Eigen::MatrixXi orders_;
};

struct Trivial {
  int dim = 1;
  friend bool operator==(const Trivial&, const Trivial&) = default;
};

struct NamedFamily {
  Family family = Family::A;
  int parameter = 1;  // rank l, or the dihedral order m for I
  friend bool operator==(const NamedFamily&, const NamedFamily&) = default;
};

struct ExplicitDiagram {
  CoxeterMatrix matrix;
  friend bool operator==(const ExplicitDiagram&, const ExplicitDiagram&) = default;
};

using Atom = std::variant<Trivial, NamedFamily, ExplicitDiagram>;

/// Dimension of the space an atom acts on.
int atom_dimension(const Atom& atom);
bool is_trivial(const Atom& atom);
/// Canonical text form, e.g. "A3", "I7", "T2", "M(3,2,3)".
std::string render_atom(const Atom& atom);
/// Throws RangeError when the parameter is outside the classification.
void validate_atom(const Atom& atom);

struct GroupSpec {
  std::vector<Atom> components;

  int dimension() const;
  friend bool operator==(const GroupSpec&, const GroupSpec&) = default;
};

/// Grammar: atoms joined by 'x', case-insensitive, whitespace ignored.
/// Atoms: A<l> B<l> D<l> E<l> F4 H<l> I<m> T<k>, or M(m12,m13,...,m23,...)
/// listing the strict upper triangle of an explicit Coxeter matrix row by row.
GroupSpec parse_group_spec(std::string_view text);
std::string render(const GroupSpec& spec);

CoxeterMatrix coxeter_matrix(const Atom& atom);

/// Entry (i, j) is 1 on the diagonal and -cos(pi / m_ij) off it.
Matrix gram_matrix(const CoxeterMatrix& cm);

/// Row range of one atom inside a fundamental system.
struct Block {
  Atom atom;
  int offset = 0;
  int size = 0;
  bool trivial() const { return is_trivial(atom); }
};

/// Rows of `roots` are the fundamental roots (trivial atoms contribute
/// orthonormal complement rows that carry no reflection); `dual` = roots^-1,
/// so the closed chamber is {dual * y : y >= 0 on root rows}.
struct FundamentalSystem {
  GroupSpec spec;
  Matrix roots;
  Matrix dual;
  std::vector<Block> blocks;

  int dimension() const { return static_cast<int>(roots.rows()); }
  /// Indices of rows that are genuine roots, in generator order.
  std::vector<int> root_rows() const;
  /// Rows of one block as a (size x d) matrix.
  Matrix block_rows(std::size_t b) const { return roots.middleRows(blocks[b].offset, blocks[b].size); }
};

/// Block-diagonal Cholesky construction: each atom's rows are the lower
/// Cholesky factor L of its Gram matrix, so L L^T = Gram.
/// Throws NotFiniteGroup for explicit diagrams whose Gram matrix is not
/// positive definite.
FundamentalSystem fundamental_system(const GroupSpec& spec);

/// Same group expressed in rotated coordinates: roots -> roots * Q^T.
FundamentalSystem dressed(const FundamentalSystem& fs, const Matrix& q);

/// A_{n-1} acting on R^n by coordinate permutations, roots (e_i - e_{i+1})/sqrt(2)
/// plus the normalized all-ones row as the trivial complement. Its chamber is
/// the set of descending vectors.
FundamentalSystem permutation_system(int n);

/// Group order for named families and products thereof; nullopt if any atom
/// is an explicit diagram or the order exceeds 2^63.
std::optional<std::uint64_t> group_order(const GroupSpec& spec);

}  // namespace reflect
