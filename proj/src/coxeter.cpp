#include "reflect/coxeter.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>

namespace reflect {

namespace {

constexpr int kMaxRank = 5000;
constexpr int kMaxDihedralOrder = 1000000;

using LongMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;

// -cos(pi/m) carried in extended precision. Near-unit cosines (large m) lose
// most of 1 - c^2 to cancellation in double.
long double gram_entry(int m) {
  if (m == 2) return 0.0L;
  if (m == 3) return -0.5L;
  return -std::cos(std::numbers::pi_v<long double> / static_cast<long double>(m));
}

LongMatrix gram_long(const CoxeterMatrix& cm) {
  const int d = cm.rank();
  LongMatrix g(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) g(i, j) = i == j ? 1.0L : gram_entry(cm(i, j));
  }
  return g;
}

// Lower Cholesky factor; returns false on a non-positive pivot.
bool cholesky_lower(const LongMatrix& g, LongMatrix& l) {
  const Eigen::Index d = g.rows();
  l = LongMatrix::Zero(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    long double pivot = g(j, j);
    for (Eigen::Index k = 0; k < j; ++k) pivot -= l(j, k) * l(j, k);
    if (!(pivot > 0.0L)) return false;
    l(j, j) = std::sqrt(pivot);
    for (Eigen::Index i = j + 1; i < d; ++i) {
      long double s = g(i, j);
      for (Eigen::Index k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return true;
}

Eigen::MatrixXi path_orders(int n) {
  Eigen::MatrixXi m = Eigen::MatrixXi::Constant(n, n, 2);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  for (int i = 0; i + 1 < n; ++i) m(i, i + 1) = m(i + 1, i) = 3;
  return m;
}

void set_edge(Eigen::MatrixXi& m, int i, int j, int order) { m(i, j) = m(j, i) = order; }

std::string family_name(Family f) { return std::string(1, family_letter(f)); }

struct Cursor {
  std::string_view text;
  std::size_t pos = 0;

  void skip_space() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  bool at_end() {
    skip_space();
    return pos >= text.size();
  }
  char peek() {
    skip_space();
    return pos < text.size() ? text[pos] : '\0';
  }
  long long integer() {
    skip_space();
    const std::size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (start == pos) throw ParseError("expected an integer", start);
    long long value = 0;
    auto [ptr, ec] = std::from_chars(text.data() + start, text.data() + pos, value);
    if (ec != std::errc{}) throw RangeError("integer too large at position " + std::to_string(start));
    return value;
  }
  void expect(char c) {
    skip_space();
    if (pos >= text.size() || text[pos] != c) {
      throw ParseError(std::string("expected '") + c + "'", pos);
    }
    ++pos;
  }
};

Atom parse_explicit(Cursor& cur) {
  cur.expect('(');
  std::vector<long long> entries;
  if (cur.peek() != ')') {
    entries.push_back(cur.integer());
    while (cur.peek() == ',') {
      cur.expect(',');
      entries.push_back(cur.integer());
    }
  }
  cur.expect(')');
  int n = 1;
  while (static_cast<std::size_t>(n * (n - 1) / 2) < entries.size()) ++n;
  if (static_cast<std::size_t>(n * (n - 1) / 2) != entries.size()) {
    throw RangeError("explicit diagram needs n(n-1)/2 upper-triangle entries, got " +
                     std::to_string(entries.size()));
  }
  Eigen::MatrixXi m = Eigen::MatrixXi::Ones(n, n);
  std::size_t k = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j, ++k) {
      if (entries[k] < 2 || entries[k] > kMaxExplicitOrder) {
        throw RangeError("explicit diagram entry out of range [2, 1000]: " + std::to_string(entries[k]));
      }
      m(i, j) = m(j, i) = static_cast<int>(entries[k]);
    }
  }
  return ExplicitDiagram{CoxeterMatrix(m)};
}

Atom parse_atom(Cursor& cur) {
  cur.skip_space();
  if (cur.at_end()) throw ParseError("expected a group atom", cur.pos);
  const std::size_t start = cur.pos;
  const char letter = static_cast<char>(std::toupper(static_cast<unsigned char>(cur.text[cur.pos])));
  ++cur.pos;
  if (letter == 'M') return parse_explicit(cur);

  Family family{};
  bool trivial = false;
  switch (letter) {
    case 'A': family = Family::A; break;
    case 'B': family = Family::B; break;
    case 'D': family = Family::D; break;
    case 'E': family = Family::E; break;
    case 'F': family = Family::F; break;
    case 'H': family = Family::H; break;
    case 'I': family = Family::I; break;
    case 'T': trivial = true; break;
    default: throw ParseError(std::string("unknown group family '") + cur.text[start] + "'", start);
  }
  const long long parameter = cur.integer();
  if (parameter > std::numeric_limits<int>::max()) {
    throw RangeError("parameter out of range: " + std::to_string(parameter));
  }
  Atom atom = trivial ? Atom{Trivial{static_cast<int>(parameter)}}
                      : Atom{NamedFamily{family, static_cast<int>(parameter)}};
  validate_atom(atom);
  return atom;
}

}  // namespace

char family_letter(Family f) {
  switch (f) {
    case Family::A: return 'A';
    case Family::B: return 'B';
    case Family::D: return 'D';
    case Family::E: return 'E';
    case Family::F: return 'F';
    case Family::H: return 'H';
    case Family::I: return 'I';
  }
  return '?';
}

CoxeterMatrix::CoxeterMatrix(Eigen::MatrixXi orders) : orders_(std::move(orders)) {
  if (orders_.rows() != orders_.cols() || orders_.rows() < 1) {
    throw RangeError("Coxeter matrix must be square and non-empty");
  }
  for (int i = 0; i < rank(); ++i) {
    if (orders_(i, i) != 1) throw RangeError("Coxeter matrix needs m_ii = 1");
    for (int j = i + 1; j < rank(); ++j) {
      if (orders_(i, j) != orders_(j, i)) throw RangeError("Coxeter matrix must be symmetric");
      if (orders_(i, j) < 2 || orders_(i, j) > kMaxExplicitOrder) {
        throw RangeError("Coxeter matrix entries must lie in [2, 1000] off the diagonal");
      }
    }
  }
}

CoxeterMatrix CoxeterMatrix::dihedral(int m) {
  if (m < 2) throw RangeError("dihedral order must be at least 2");
  Eigen::MatrixXi orders(2, 2);
  orders << 1, m, m, 1;
  return CoxeterMatrix(std::move(orders), Unchecked{});
}

bool CoxeterMatrix::irreducible() const {
  const int d = rank();
  std::vector<bool> seen(d, false);
  std::vector<int> stack{0};
  seen[0] = true;
  int count = 1;
  while (!stack.empty()) {
    const int i = stack.back();
    stack.pop_back();
    for (int j = 0; j < d; ++j) {
      if (!seen[j] && orders_(i, j) >= 3) {
        seen[j] = true;
        ++count;
        stack.push_back(j);
      }
    }
  }
  return count == d;
}

int atom_dimension(const Atom& atom) {
  return std::visit(
      [](const auto& a) -> int {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, Trivial>) {
          return a.dim;
        } else if constexpr (std::is_same_v<T, NamedFamily>) {
          return a.family == Family::I ? 2 : a.parameter;
        } else {
          return a.matrix.rank();
        }
      },
      atom);
}

bool is_trivial(const Atom& atom) { return std::holds_alternative<Trivial>(atom); }

void validate_atom(const Atom& atom) {
  if (const auto* t = std::get_if<Trivial>(&atom)) {
    if (t->dim < 1 || t->dim > kMaxRank) throw RangeError("parameter out of range: T" + std::to_string(t->dim));
    return;
  }
  const auto* nf = std::get_if<NamedFamily>(&atom);
  if (nf == nullptr) return;  // explicit diagrams validate on construction
  const int p = nf->parameter;
  bool ok = false;
  switch (nf->family) {
    case Family::A: ok = p >= 1 && p <= kMaxRank; break;
    case Family::B: ok = p >= 2 && p <= kMaxRank; break;
    case Family::D: ok = p >= 3 && p <= kMaxRank; break;
    case Family::E: ok = p >= 6 && p <= 8; break;
    case Family::F: ok = p == 4; break;
    case Family::H: ok = p == 3 || p == 4; break;
    case Family::I: ok = p >= 3 && p <= kMaxDihedralOrder; break;
  }
  if (!ok) throw RangeError("parameter out of range: " + family_name(nf->family) + std::to_string(p));
}

std::string render_atom(const Atom& atom) {
  if (const auto* t = std::get_if<Trivial>(&atom)) return "T" + std::to_string(t->dim);
  if (const auto* nf = std::get_if<NamedFamily>(&atom)) {
    return family_name(nf->family) + std::to_string(nf->parameter);
  }
  const auto& cm = std::get<ExplicitDiagram>(atom).matrix;
  std::string out = "M(";
  bool first = true;
  for (int i = 0; i < cm.rank(); ++i) {
    for (int j = i + 1; j < cm.rank(); ++j) {
      if (!first) out += ',';
      out += std::to_string(cm(i, j));
      first = false;
    }
  }
  return out + ")";
}

int GroupSpec::dimension() const {
  int d = 0;
  for (const auto& a : components) d += atom_dimension(a);
  return d;
}

GroupSpec parse_group_spec(std::string_view text) {
  Cursor cur{text};
  GroupSpec spec;
  spec.components.push_back(parse_atom(cur));
  while (!cur.at_end()) {
    const char c = cur.peek();
    if (c != 'x' && c != 'X') throw ParseError(std::string("expected 'x' or end of input, found '") + c + "'", cur.pos);
    ++cur.pos;
    spec.components.push_back(parse_atom(cur));
  }
  return spec;
}

std::string render(const GroupSpec& spec) {
  std::string out;
  for (std::size_t i = 0; i < spec.components.size(); ++i) {
    if (i > 0) out += " x ";
    out += render_atom(spec.components[i]);
  }
  return out;
}

CoxeterMatrix coxeter_matrix(const Atom& atom) {
  if (const auto* ed = std::get_if<ExplicitDiagram>(&atom)) return ed->matrix;
  const auto* nf = std::get_if<NamedFamily>(&atom);
  if (nf == nullptr) throw RangeError("trivial atoms have no Coxeter matrix");
  validate_atom(atom);
  const int p = nf->parameter;
  switch (nf->family) {
    case Family::A: return CoxeterMatrix(path_orders(p));
    case Family::B: {
      auto m = path_orders(p);
      set_edge(m, p - 2, p - 1, 4);
      return CoxeterMatrix(m);
    }
    case Family::D: {
      if (p == 3) return CoxeterMatrix(path_orders(3));  // D3 = A3
      auto m = path_orders(p - 1);
      m.conservativeResize(p, p);
      m.row(p - 1).setConstant(2);
      m.col(p - 1).setConstant(2);
      m(p - 1, p - 1) = 1;
      set_edge(m, p - 3, p - 1, 3);
      return CoxeterMatrix(m);
    }
    case Family::E: {
      auto m = path_orders(p - 1);
      m.conservativeResize(p, p);
      m.row(p - 1).setConstant(2);
      m.col(p - 1).setConstant(2);
      m(p - 1, p - 1) = 1;
      set_edge(m, 2, p - 1, 3);
      return CoxeterMatrix(m);
    }
    case Family::F: {
      auto m = path_orders(4);
      set_edge(m, 1, 2, 4);
      return CoxeterMatrix(m);
    }
    case Family::H: {
      auto m = path_orders(p);
      set_edge(m, 0, 1, 5);
      return CoxeterMatrix(m);
    }
    case Family::I: return CoxeterMatrix::dihedral(p);
  }
  throw RangeError("unknown family");
}

Matrix gram_matrix(const CoxeterMatrix& cm) { return gram_long(cm).cast<double>(); }

std::vector<int> FundamentalSystem::root_rows() const {
  std::vector<int> rows;
  for (const auto& b : blocks) {
    if (b.trivial()) continue;
    for (int i = 0; i < b.size; ++i) rows.push_back(b.offset + i);
  }
  return rows;
}

FundamentalSystem fundamental_system(const GroupSpec& spec) {
  if (spec.components.empty()) throw RangeError("group specification has no components");
  for (const auto& a : spec.components) validate_atom(a);

  FundamentalSystem fs;
  fs.spec = spec;
  const int d = spec.dimension();
  fs.roots = Matrix::Zero(d, d);
  int offset = 0;
  for (const auto& atom : spec.components) {
    const int k = atom_dimension(atom);
    fs.blocks.push_back(Block{atom, offset, k});
    if (is_trivial(atom)) {
      fs.roots.block(offset, offset, k, k).setIdentity();
    } else {
      const CoxeterMatrix cm = coxeter_matrix(atom);
      const LongMatrix g = gram_long(cm);
      if (std::holds_alternative<ExplicitDiagram>(atom)) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(g.cast<double>(), Eigen::EigenvaluesOnly);
        const auto& ev = es.eigenvalues();
        if (ev.minCoeff() <= tol::positive_definite * ev.maxCoeff()) {
          throw NotFiniteGroup("Gram matrix of " + render_atom(atom) +
                               " is not positive definite (smallest eigenvalue " +
                               std::to_string(ev.minCoeff()) + "); the Coxeter group is infinite");
        }
      }
      LongMatrix l;
      if (!cholesky_lower(g, l)) {
        throw NotFiniteGroup("Cholesky factorization failed for " + render_atom(atom));
      }
      fs.roots.block(offset, offset, k, k) = l.cast<double>();
    }
    offset += k;
  }
  // Block-diagonal and lower triangular, so the inverse is a forward substitution.
  fs.dual = fs.roots.triangularView<Eigen::Lower>().solve(Matrix::Identity(d, d));
  return fs;
}

FundamentalSystem dressed(const FundamentalSystem& fs, const Matrix& q) {
  if (q.rows() != fs.dimension() || q.cols() != fs.dimension()) {
    throw DimensionMismatch("dressing matrix has the wrong size");
  }
  FundamentalSystem out = fs;
  out.roots = fs.roots * q.transpose();
  out.dual = q * fs.dual;
  return out;
}

FundamentalSystem permutation_system(int n) {
  if (n < 2) throw RangeError("permutation realization needs n >= 2");
  FundamentalSystem fs;
  fs.spec.components = {NamedFamily{Family::A, n - 1}, Trivial{1}};
  fs.roots = Matrix::Zero(n, n);
  const double h = 1.0 / std::sqrt(2.0);
  for (int i = 0; i + 1 < n; ++i) {
    fs.roots(i, i) = h;
    fs.roots(i, i + 1) = -h;
  }
  fs.roots.row(n - 1).setConstant(1.0 / std::sqrt(static_cast<double>(n)));
  fs.dual = fs.roots.fullPivLu().inverse();
  fs.blocks = {Block{fs.spec.components[0], 0, n - 1}, Block{fs.spec.components[1], n - 1, 1}};
  return fs;
}

std::optional<std::uint64_t> group_order(const GroupSpec& spec) {
  unsigned __int128 total = 1;
  constexpr unsigned __int128 limit = static_cast<unsigned __int128>(1) << 63;
  auto mul = [&](unsigned __int128 f) {
    total *= f;
    return total < limit;
  };
  for (const auto& atom : spec.components) {
    if (std::holds_alternative<ExplicitDiagram>(atom)) return std::nullopt;
    if (is_trivial(atom)) continue;
    const auto& nf = std::get<NamedFamily>(atom);
    const int p = nf.parameter;
    bool ok = true;
    switch (nf.family) {
      case Family::A:
        for (int i = 2; i <= p + 1 && ok; ++i) ok = mul(i);
        break;
      case Family::B:
        for (int i = 1; i <= p && ok; ++i) ok = mul(2 * i);
        break;
      case Family::D:
        ok = mul(p);  // 2^(l-1) l! = l * prod_{i<l} 2i
        for (int i = 1; i < p && ok; ++i) ok = mul(2 * i);
        break;
      case Family::E:
        ok = mul(p == 6 ? 51840ULL : p == 7 ? 2903040ULL : 696729600ULL);
        break;
      case Family::F: ok = mul(1152); break;
      case Family::H: ok = mul(p == 3 ? 120 : 14400); break;
      case Family::I: ok = mul(2ULL * static_cast<unsigned>(p)); break;
    }
    if (!ok) return std::nullopt;
  }
  return static_cast<std::uint64_t>(total);
}

}  // namespace reflect
