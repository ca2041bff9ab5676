#include "cli.hpp"

#include "reflect/asymptotics.hpp"
#include "reflect/char_poly.hpp"
#include "reflect/conditioning.hpp"
#include "reflect/groups.hpp"
#include "reflect/maxfilter.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

namespace reflect::cli {

namespace {

constexpr const char* kCsvHelp = R"(CSV outputs:
  sweep --out/--csv      ell,kappa,kappa_over_ell
  kappa --csv            component,kappa,sigma_max,sigma_min,argmax
  templates --csv        t0,...,t{d-1}   (one template per row)
  templates --quotients-out  index,kind,quotient   (kind = uniform|directed)
  enumerate --format csv one d x d matrix per line, row-major
Environment: REFLECT_MAXFILTER_THREADS caps internal parallelism.)";

struct Globals {
  bool json = false;
  std::uint64_t seed = 0;
  std::size_t cap = kDefaultEnumerationCap;
  bool tol_report = false;
};

struct Row {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  std::string detail;
  bool pass() const { return residual < tolerance; }
};

Json row_json(const Row& r) {
  Json j = {{"name", r.name}, {"residual", r.residual}, {"tolerance", r.tolerance}, {"pass", r.pass()}};
  if (!r.detail.empty()) j["detail"] = r.detail;
  return j;
}

// Thrown after a verify suite ran but some residual exceeded its tolerance.
class VerifyFailed : public Error {
 public:
  VerifyFailed(const std::string& what, Json payload) : Error(what), payload_(std::move(payload)) {}
  const Json& payload() const { return payload_; }

 private:
  Json payload_;
};

Json tolerance_table() {
  return {{"unit_norm", tol::unit_norm},
          {"inverse", tol::inverse},
          {"positive_definite_relative", tol::positive_definite},
          {"degenerate_vector", tol::degenerate_vector},
          {"cone", tol::cone},
          {"dedup", tol::dedup},
          {"spectral_checks", 1e-9},
          {"eigen_identity", 1e-8},
          {"eigen_identity_degenerate_gap", 1e-10},
          {"certificate_gap", certificate_tol::gap},
          {"certificate_diag", certificate_tol::diagonal},
          {"certificate_nuclear_slack", certificate_tol::nuclear_slack},
          {"certificate_copositivity", certificate_tol::copositivity},
          {"certificate_kappa", certificate_tol::kappa},
          {"backends", 1e-9},
          {"isometry", 1e-9},
          {"recursion_roots", 1e-8},
          {"dihedral_closed_form", 1e-10},
          {"a_family_oracle_relative", 1e-11},
          {"tail_gap_A", 2e-3},
          {"tail_gap_BD", 1e-2},
          {"tail_gap_I", 1e-3}};
}

std::string fmt(double v, int precision = 10) {
  std::ostringstream os;
  os << std::setprecision(precision) << v;
  return os.str();
}

std::string sci(double v) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(2) << v;
  return os.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

GroupSpec parse_group_arg(const std::string& text) {
  std::string source = text;
  if (!source.empty() && source[0] == '@') source = read_file(source.substr(1));
  const auto first = source.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (source[first] == '{' || source[first] == '"')) {
    try {
      return group_spec_from_json(Json::parse(source));
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError("malformed group JSON", e.byte);
    }
  }
  return parse_group_spec(source);
}

std::vector<Atom> nontrivial_atoms(const GroupSpec& spec) {
  std::vector<Atom> out;
  for (const auto& a : spec.components) {
    if (!is_trivial(a)) out.push_back(a);
  }
  if (out.empty()) throw UsageError("group has no essential irreducible component");
  return out;
}

std::vector<Atom> small_irreducible_atoms() {
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

std::vector<Atom> spectral_default_atoms() {
  auto out = small_irreducible_atoms();
  for (int l = 9; l <= 12; ++l) {
    out.push_back(NamedFamily{Family::A, l});
    out.push_back(NamedFamily{Family::B, l});
    out.push_back(NamedFamily{Family::D, l});
  }
  return out;
}

std::vector<GroupSpec> enumerable_default_groups() {
  std::vector<GroupSpec> out;
  for (const char* s : {"A1", "A2", "A3", "A4", "B2", "B3", "B4", "D4", "F4", "H3"}) out.push_back(parse_group_spec(s));
  for (int m = 3; m <= 12; ++m) out.push_back(GroupSpec{{NamedFamily{Family::I, m}}});
  return out;
}

Vector random_vector(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> normal;
  Vector v(d);
  for (int i = 0; i < d; ++i) v(i) = normal(rng);
  return v;
}

Family parse_family(const std::string& s) {
  if (s.size() != 1) throw UsageError("family must be one of A, B, D, I; got '" + s + "'");
  return family_from_letter(s[0]);
}

Json json_vector(const Vector& v) { return vector_to_json(v); }

void print_vector(std::ostream& out, const char* label, const Vector& v) {
  out << label << ": [";
  for (Eigen::Index i = 0; i < v.size(); ++i) out << (i ? ", " : "") << fmt(v(i), 12);
  out << "]\n";
}

void print_matrix_rows(std::ostream& out, const Matrix& m, bool csv) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (csv) {
        out << (c ? "," : "") << std::setprecision(17) << m(r, c);
      } else {
        out << (c ? "  " : "  ") << std::setw(14) << fmt(m(r, c), 8);
      }
    }
    out << '\n';
  }
}

Json rows_payload(const std::string& suite, const std::vector<Row>& rows) {
  Json list = Json::array();
  bool pass = true;
  for (const auto& r : rows) {
    list.push_back(row_json(r));
    pass = pass && r.pass();
  }
  return {{"suite", suite}, {"rows", list}, {"pass", pass}};
}

// ---- kappa ---------------------------------------------------------------

struct KappaOptions {
  std::string group;
  bool csv = false;
  bool templates = false;
};

Json cmd_kappa(const Globals& g, const KappaOptions& o, std::ostream& out) {
  const ConditionReport r = kappa_report(parse_group_arg(o.group));
  Json payload = r;
  if (g.json) return payload;
  if (o.csv) {
    out << "component,kappa,sigma_max,sigma_min,argmax\n" << std::setprecision(17);
    for (std::size_t i = 0; i < r.per_component.size(); ++i) {
      const auto& c = r.per_component[i];
      out << c.label << ',' << c.kappa << ',' << c.sigma_max << ',' << c.sigma_min << ','
          << (i == r.argmax_component ? 1 : 0) << '\n';
    }
    if (o.templates) print_matrix_rows(out, r.templates, true);
    return payload;
  }
  out << "group: " << render(r.spec) << '\n'
      << "kappa: " << fmt(r.kappa, 12) << '\n'
      << "sigma_max: " << fmt(r.sigma_max, 12) << '\n'
      << "sigma_min: " << fmt(r.sigma_min, 12) << '\n'
      << std::left << std::setw(12) << "component" << std::setw(20) << "kappa" << std::setw(20) << "sigma_max"
      << std::setw(20) << "sigma_min" << '\n';
  for (std::size_t i = 0; i < r.per_component.size(); ++i) {
    const auto& c = r.per_component[i];
    out << std::setw(12) << c.label << std::setw(20) << fmt(c.kappa, 12) << std::setw(20) << fmt(c.sigma_max, 12)
        << std::setw(20) << fmt(c.sigma_min, 12) << (i == r.argmax_component ? "argmax" : "") << '\n';
  }
  out << std::right;
  for (const auto& note : r.notes) out << "note: " << note << '\n';
  if (o.templates) {
    out << "templates (columns):\n";
    print_matrix_rows(out, r.templates, false);
  }
  return payload;
}

// ---- verify --------------------------------------------------------------

struct VerifyOptions {
  std::string suite;
  std::string group;
  std::string family;
  int max_ell = 20;
  std::string ells;
  std::size_t samples = 100000;
  std::size_t pairs = 100;
};

std::vector<Row> verify_spectral(const VerifyOptions& o) {
  const auto atoms = o.group.empty() ? spectral_default_atoms() : nontrivial_atoms(parse_group_arg(o.group));
  std::vector<Row> rows;
  for (const auto& atom : atoms) {
    const SpectralCheckReport r = spectral_checks(atom);
    const std::string label = render_atom(atom);
    rows.push_back({label + " check_a", r.squared_entries.residual, r.squared_entries.tolerance, {}});
    rows.push_back({label + " check_b", r.spectrum_symmetry.residual, r.spectrum_symmetry.tolerance, {}});
    rows.push_back({label + " check_c", r.minor_symmetry.residual, r.minor_symmetry.tolerance, {}});
    rows.push_back({label + " eigen_identity", r.eigen_identity.residual, r.eigen_identity_tolerance,
                    std::to_string(r.eigen_identity.skipped) + " degenerate skipped"});
  }
  return rows;
}

std::vector<Row> verify_duality(const Globals& g, const VerifyOptions& o) {
  const auto atoms = o.group.empty() ? small_irreducible_atoms() : nontrivial_atoms(parse_group_arg(o.group));
  std::vector<Row> rows;
  for (const auto& atom : atoms) {
    const DualCertificate c = build_dual_certificate(atom_roots(atom), o.samples, g.seed);
    const std::string label = render_atom(atom);
    rows.push_back({label + " gap_scalar", c.gap_scalar, certificate_tol::gap, {}});
    rows.push_back({label + " gap_diag", c.gap_diag, certificate_tol::gap, {}});
    rows.push_back({label + " diag_residual", c.diag_residual, certificate_tol::diagonal, {}});
    rows.push_back({label + " nuclear_excess", std::max(0.0, c.nuclear_norm_y - 1.0), certificate_tol::nuclear_slack,
                    {}});
    rows.push_back({label + " copositivity_deficit", std::max(0.0, -c.copositivity_margin),
                    -certificate_tol::copositivity, "margin " + sci(c.copositivity_margin)});
    rows.push_back({label + " kappa_consistency", std::abs(c.kappa_from_alpha - c.kappa_svd), certificate_tol::kappa,
                    "kappa " + fmt(c.kappa_svd)});
  }
  return rows;
}

std::vector<Row> verify_recursion(const VerifyOptions& o) {
  std::vector<Family> families;
  if (o.family.empty()) {
    families = {Family::A, Family::B, Family::D};
  } else {
    families = {parse_family(o.family)};
  }
  std::vector<Row> rows;
  for (Family f : families) {
    const int first = f == Family::A ? 1 : f == Family::B ? 2 : 3;
    if (o.max_ell < first) throw RangeError("--max-ell is below the family's smallest rank");
    for (int ell = first; ell <= o.max_ell; ++ell) {
      const CharPolynomial p = char_poly_parity(f, ell);
      const std::string label = std::string(1, family_letter(f)) + std::to_string(ell);
      const Parity expected = ell % 2 == 1 ? Parity::Odd : Parity::Even;
      rows.push_back({label + " parity", p.parity == expected ? 0.0 : 1.0, 0.5, parity_name(p.parity)});
      if (ell <= 12) rows.push_back({label + " roots", compare_roots(p).max_deviation, 1e-8, {}});
    }
  }
  return rows;
}

std::vector<GroupSpec> enumerable_groups(const VerifyOptions& o) {
  if (o.group.empty()) return enumerable_default_groups();
  return {parse_group_arg(o.group)};
}

std::vector<Row> verify_backends(const Globals& g, const VerifyOptions& o) {
  std::vector<Row> rows;
  std::mt19937_64 rng(g.seed);
  for (const auto& spec : enumerable_groups(o)) {
    const RealizedGroup group = enumerate_group(fundamental_system(spec), g.cap);
    if (!group.elements) throw ElementsUnavailable(render(spec) + " has more than --cap elements");
    double worst = 0.0;
    for (std::size_t i = 0; i < o.pairs; ++i) {
      const Vector x = random_vector(rng, group.dimension());
      const Vector y = random_vector(rng, group.dimension());
      worst = std::max(worst, std::abs(maxfilter_inner(x, y, group, Backend::ChamberRep) -
                                       maxfilter_inner(x, y, group, Backend::OrbitBruteForce)));
    }
    rows.push_back({render(spec) + " backends", worst, 1e-9, "order " + std::to_string(*group.order)});
  }
  return rows;
}

std::vector<Row> verify_isometry(const Globals& g, const VerifyOptions& o) {
  std::vector<Row> rows;
  std::mt19937_64 rng(g.seed);
  for (const auto& spec : enumerable_groups(o)) {
    const RealizedGroup group = enumerate_group(fundamental_system(spec), g.cap);
    if (!group.elements) throw ElementsUnavailable(render(spec) + " has more than --cap elements");
    double worst = 0.0;
    for (std::size_t i = 0; i < o.pairs; ++i) {
      const Vector x = random_vector(rng, group.dimension());
      const Vector y = random_vector(rng, group.dimension());
      const Vector ry = rep(y, group.fs);
      double best = std::numeric_limits<double>::infinity();
      for (const auto& element : *group.elements) best = std::min(best, (element * x - ry).norm());
      worst = std::max(worst, std::abs(best - (rep(x, group.fs) - ry).norm()));
    }
    rows.push_back({render(spec) + " isometry", worst, 1e-9, {}});
  }
  return rows;
}

std::vector<Row> verify_asymptotic(const VerifyOptions& o) {
  std::vector<Family> families;
  if (o.family.empty()) {
    families = {Family::A, Family::B, Family::D, Family::I};
  } else {
    families = {parse_family(o.family)};
  }
  std::vector<Row> rows;
  for (Family f : families) {
    const std::vector<int> ells = o.ells.empty() ? std::vector<int>{f == Family::I ? 2000 : 1000} : parse_ells(o.ells);
    const SweepReport r = family_sweep(f, ells);
    const std::string label(1, family_letter(f));
    const double tail_tol = f == Family::A ? 2e-3 : f == Family::I ? 1e-3 : 1e-2;
    rows.push_back({label + " tail_gap", r.max_relative_gap_at_tail, tail_tol,
                    "l = " + std::to_string(r.points.back().ell) + ", kappa/l = " + fmt(r.points.back().kappa_over_ell)});
    int decreases = 0;
    for (std::size_t i = 1; i < r.points.size(); ++i) decreases += r.points[i].kappa <= r.points[i - 1].kappa;
    rows.push_back({label + " monotone", static_cast<double>(decreases), 0.5, {}});
    if (f == Family::A) {
      double worst = 0.0;
      for (const auto& p : r.points) {
        const double oracle = 1.0 / std::tan(std::numbers::pi / (2.0 * (p.ell + 1)));
        worst = std::max(worst, std::abs(p.kappa - oracle) / oracle);
      }
      rows.push_back({label + " cot_oracle_relative", worst, 1e-11, {}});
    }
    if (f == Family::I) {
      double worst = 0.0;
      for (const auto& p : r.points) worst = std::max(worst, std::abs(p.kappa - kappa_dihedral_closed_form(p.ell)));
      rows.push_back({label + " closed_form", worst, 1e-10, {}});
    }
  }
  return rows;
}

Json cmd_verify(const Globals& g, const VerifyOptions& o, std::ostream& out) {
  std::vector<Row> rows;
  if (o.suite == "spectral") {
    rows = verify_spectral(o);
  } else if (o.suite == "duality") {
    rows = verify_duality(g, o);
  } else if (o.suite == "recursion") {
    rows = verify_recursion(o);
  } else if (o.suite == "backends") {
    rows = verify_backends(g, o);
  } else if (o.suite == "isometry") {
    rows = verify_isometry(g, o);
  } else {
    rows = verify_asymptotic(o);
  }
  Json payload = rows_payload(o.suite, rows);
  if (!g.json) {
    out << std::left << std::setw(34) << "check" << std::setw(12) << "residual" << std::setw(12) << "tolerance"
        << "status\n";
    for (const auto& r : rows) {
      out << std::setw(34) << r.name << std::setw(12) << sci(r.residual) << std::setw(12) << sci(r.tolerance)
          << (r.pass() ? "ok" : "FAIL");
      if (!r.detail.empty()) out << "  (" << r.detail << ")";
      out << '\n';
    }
    out << std::right;
  }
  for (const auto& r : rows) {
    if (!r.pass()) {
      throw VerifyFailed("verify " + o.suite + ": " + r.name + " residual " + sci(r.residual) + " exceeds " +
                             sci(r.tolerance),
                         payload);
    }
  }
  return payload;
}

// ---- maxfilter -----------------------------------------------------------

struct MaxfilterOptions {
  std::string group;
  int permutation = 0;
  std::string x, y, x_file, y_file;
  std::string backend = "chamber";
};

Vector vector_input(const std::string& inline_text, const std::string& file, const char* name) {
  if (!inline_text.empty()) return parse_vector(inline_text);
  if (!file.empty()) return read_vector_file(file);
  throw UsageError(std::string("missing --") + name + " (inline) or --" + name + "-file");
}

Json cmd_maxfilter(const Globals& g, const MaxfilterOptions& o, std::ostream& out) {
  if (o.group.empty() == (o.permutation == 0)) throw UsageError("give exactly one of --group or --permutation");
  const FundamentalSystem fs =
      o.permutation > 0 ? permutation_system(o.permutation) : fundamental_system(parse_group_arg(o.group));
  const Vector x = vector_input(o.x, o.x_file, "x");
  const Vector y = vector_input(o.y, o.y_file, "y");
  if (x.size() != fs.dimension() || y.size() != fs.dimension()) {
    throw DimensionMismatch("vectors must have length " + std::to_string(fs.dimension()));
  }

  Json values = Json::object();
  if (o.backend == "chamber" || o.backend == "both") values["chamber"] = maxfilter_inner(x, y, fs);
  if (o.backend == "brute" || o.backend == "both") {
    const RealizedGroup group = enumerate_group(fs, g.cap);
    values["brute"] = maxfilter_inner(x, y, group, Backend::OrbitBruteForce);
  }
  const Vector rx = rep(x, fs);
  const Vector ry = rep(y, fs);
  const std::string label = o.permutation > 0 ? "S" + std::to_string(o.permutation) + " (coordinate permutations)"
                                              : render(fs.spec);
  Json payload = {{"group", label}, {"values", values}, {"rep_x", json_vector(rx)}, {"rep_y", json_vector(ry)}};
  if (!g.json) {
    out << "group: " << label << '\n';
    for (const auto& [name, v] : values.items()) out << "maxfilter (" << name << "): " << fmt(v.get<double>(), 15) << '\n';
    print_vector(out, "rep(x)", rx);
    print_vector(out, "rep(y)", ry);
  }
  return payload;
}

// ---- sweep ---------------------------------------------------------------

struct SweepOptions {
  std::string family;
  std::string ells;
  std::string out_path;
  std::string solver = "auto";
  bool csv = false;
};

Json cmd_sweep(const Globals& g, const SweepOptions& o, std::ostream& out) {
  const Family f = parse_family(o.family);
  const SolverPath path = o.solver == "dense" ? SolverPath::Dense
                          : o.solver == "structured" ? SolverPath::Structured
                                                     : SolverPath::Auto;
  const SweepReport r = family_sweep(f, parse_ells(o.ells), path);
  if (!o.out_path.empty()) {
    std::ofstream file(o.out_path);
    if (!file) throw UsageError("cannot write " + o.out_path);
    write_sweep_csv(file, r);
  }
  Json payload = r;
  if (g.json) return payload;
  if (o.csv) {
    write_sweep_csv(out, r);
    return payload;
  }
  out << "family: " << family_letter(f) << "  limit constant: " << fmt(r.limit_constant, 12) << '\n'
      << std::setw(8) << "ell" << std::setw(22) << "kappa" << std::setw(20) << "kappa/ell" << '\n';
  for (const auto& p : r.points) {
    out << std::setw(8) << p.ell << std::setw(22) << fmt(p.kappa, 15) << std::setw(20) << fmt(p.kappa_over_ell, 12)
        << '\n';
  }
  out << "relative gap at tail: " << sci(r.max_relative_gap_at_tail) << '\n';
  return payload;
}

// ---- enumerate -----------------------------------------------------------

struct EnumerateOptions {
  std::string group;
  std::string out_path;
  std::string format = "binary";
};

Json cmd_enumerate(const Globals& g, const EnumerateOptions& o, std::ostream& out) {
  const GroupSpec spec = parse_group_arg(o.group);
  const RealizedGroup group = enumerate_group(fundamental_system(spec), g.cap);
  Json payload = {{"group", render(spec)}, {"cap", g.cap}, {"overflow", group.overflow}};
  payload["order"] = group.order ? Json(*group.order) : Json(nullptr);
  if (const auto expected = group_order(spec)) payload["expected_order"] = *expected;
  if (!o.out_path.empty()) {
    if (!group.elements) throw ElementsUnavailable(render(spec) + " has more than " + std::to_string(g.cap) + " elements");
    std::ofstream file(o.out_path, std::ios::binary);
    if (!file) throw UsageError("cannot write " + o.out_path);
    if (o.format == "csv") {
      write_elements_csv(file, group);
    } else {
      write_elements_binary(file, group);
    }
    payload["written"] = o.out_path;
  }
  if (!g.json) {
    out << "group: " << render(spec) << '\n';
    if (group.order) {
      out << "order: " << *group.order << '\n';
    } else {
      out << "order: more than " << g.cap << " (cap reached)\n";
    }
    if (!o.out_path.empty()) out << "elements written to " << o.out_path << '\n';
  }
  return payload;
}

// ---- templates -----------------------------------------------------------

struct TemplatesOptions {
  std::string group;
  std::size_t lipschitz = 0;
  std::string quotients_out;
  bool csv = false;
};

Json cmd_templates(const Globals& g, const TemplatesOptions& o, std::ostream& out) {
  const FundamentalSystem fs = fundamental_system(parse_group_arg(o.group));
  const ConditionReport report = kappa_report(fs);
  const MaxFilterBank bank = make_bank(fs, report.templates);
  Json payload = {{"kappa", report.kappa}, {"bank", bank}};
  std::optional<LipschitzEstimate> est;
  if (o.lipschitz > 0) {
    est = empirical_lipschitz(bank, o.lipschitz, g.seed);
    payload["lipschitz"] = *est;
    if (!o.quotients_out.empty()) {
      std::ofstream file(o.quotients_out);
      if (!file) throw UsageError("cannot write " + o.quotients_out);
      write_quotients_csv(file, *est);
    }
  }
  if (g.json) return payload;
  if (o.csv) {
    write_bank_csv(out, bank);
    return payload;
  }
  out << "group: " << render(fs.spec) << "\nkappa: " << fmt(report.kappa, 12) << "\ntemplates (rows):\n";
  print_matrix_rows(out, report.templates.transpose(), false);
  if (est) {
    out << "empirical lipschitz over " << est->samples << " pairs: lower " << fmt(est->lower, 12) << ", upper "
        << fmt(est->upper, 12) << '\n'
        << "linearized map: sigma_min " << fmt(est->sigma_min, 12) << ", sigma_max " << fmt(est->sigma_max, 12)
        << '\n';
  }
  return payload;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const UsageError*>(&e)) return 2;
  return 1;
}

}  // namespace

Vector parse_vector(const std::string& text) {
  std::vector<double> values;
  std::size_t i = 0;
  const auto is_sep = [](char c) { return c == ',' || c == ' ' || c == '\t' || c == '\n' || c == '\r'; };
  while (i < text.size()) {
    while (i < text.size() && is_sep(text[i])) ++i;
    if (i >= text.size()) break;
    std::size_t end = i;
    while (end < text.size() && !is_sep(text[end])) ++end;
    const std::string token = text.substr(i, end - i);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size() || !std::isfinite(v)) throw ParseError("invalid number '" + token + "'", i);
    values.push_back(v);
    i = end;
  }
  if (values.empty()) throw ParseError("empty vector", 0);
  return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

Vector read_vector_file(const std::string& path) { return parse_vector(read_file(path)); }

CommandResult run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Optimal max filtering for finite reflection groups", "reflect-maxfilter"};
  app.footer(kCsvHelp);
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_flag("--json", g.json, "Print the JSON payload instead of text");
  app.add_option("--seed", g.seed, "Seed for randomized checks and sampling")->capture_default_str();
  app.add_option("--cap", g.cap, "Enumeration cap for brute-force backends")->capture_default_str()->check(
      CLI::PositiveNumber);
  app.add_flag("--tol-report", g.tol_report, "Attach the table of documented tolerances");

  KappaOptions kappa;
  auto* kappa_cmd = app.add_subcommand("kappa", "Optimal condition number and minimal optimal templates");
  kappa_cmd->add_option("group", kappa.group, "Group spec, e.g. \"A3 x I7\", JSON, or @file")->required();
  kappa_cmd->add_flag("--csv", kappa.csv, "Per-component table as CSV");
  kappa_cmd->add_flag("--templates", kappa.templates, "Append the template matrix");

  VerifyOptions verify;
  auto* verify_cmd = app.add_subcommand("verify", "Run an invariant suite and report residuals");
  verify_cmd->add_option("suite", verify.suite, "spectral|duality|recursion|isometry|backends|asymptotic")
      ->required()
      ->check(CLI::IsMember({"spectral", "duality", "recursion", "isometry", "backends", "asymptotic"}));
  verify_cmd->add_option("--group", verify.group, "Group spec (defaults to the built-in atom list)");
  verify_cmd->add_option("--family", verify.family, "A, B, D (recursion) or A, B, D, I (asymptotic)");
  verify_cmd->add_option("--max-ell", verify.max_ell, "Largest rank for the recursion suite")->capture_default_str();
  verify_cmd->add_option("--ells", verify.ells, "Ranks for the asymptotic suite, e.g. 100:1600:x2");
  verify_cmd->add_option("--samples", verify.samples, "Copositivity samples per certificate")->capture_default_str();
  verify_cmd->add_option("--pairs", verify.pairs, "Random pairs per group for backends/isometry")
      ->capture_default_str();

  MaxfilterOptions mf;
  auto* mf_cmd = app.add_subcommand("maxfilter", "Evaluate <<G.x, G.y>> and the chamber representatives");
  mf_cmd->add_option("--group", mf.group, "Group spec");
  mf_cmd->add_option("--permutation", mf.permutation, "Use coordinate permutations of R^n instead of --group")
      ->check(CLI::Range(2, 64));
  mf_cmd->add_option("--x", mf.x, "Inline vector, e.g. 1,0,-2 (takes precedence over --x-file)");
  mf_cmd->add_option("--y", mf.y, "Inline vector (takes precedence over --y-file)");
  mf_cmd->add_option("--x-file", mf.x_file, "Single-column CSV file");
  mf_cmd->add_option("--y-file", mf.y_file, "Single-column CSV file");
  mf_cmd->add_option("--backend", mf.backend, "chamber|brute|both")
      ->capture_default_str()
      ->check(CLI::IsMember({"chamber", "brute", "both"}));

  SweepOptions sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "kappa along a family: A, B, D or I");
  sweep_cmd->add_option("family", sweep.family, "A, B, D or I")->required();
  sweep_cmd->add_option("--ells", sweep.ells, "100:1600:x2, 3:100, 3:100:+5 or a list")->required();
  sweep_cmd->add_option("--out", sweep.out_path, "Write ell,kappa,kappa_over_ell CSV here");
  sweep_cmd->add_option("--solver", sweep.solver, "auto|structured|dense")
      ->capture_default_str()
      ->check(CLI::IsMember({"auto", "structured", "dense"}));
  sweep_cmd->add_flag("--csv", sweep.csv, "Print CSV instead of a table");

  EnumerateOptions en;
  auto* en_cmd = app.add_subcommand("enumerate", "Enumerate group elements by breadth-first closure");
  en_cmd->add_option("group", en.group, "Group spec")->required();
  en_cmd->add_option("--out", en.out_path, "Dump the elements to this file");
  en_cmd->add_option("--format", en.format, "binary|csv")
      ->capture_default_str()
      ->check(CLI::IsMember({"binary", "csv"}));

  TemplatesOptions tp;
  auto* tp_cmd = app.add_subcommand("templates", "Minimal optimal templates and empirical bilipschitz bounds");
  tp_cmd->add_option("group", tp.group, "Group spec")->required();
  tp_cmd->add_option("--lipschitz", tp.lipschitz, "Number of sampled pairs (0 = skip)")->capture_default_str();
  tp_cmd->add_option("--quotients-out", tp.quotients_out, "Write index,kind,quotient CSV here");
  tp_cmd->add_flag("--csv", tp.csv, "Print templates as CSV rows");

  CommandResult result;
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return result;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return result;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    result.status = Status::Error;
    result.exit_code = 2;
    result.payload = {{"status", "error"}, {"error", e.what()}, {"exit_code", 2}};
    if (g.json) out << result.payload.dump(2) << '\n';
    return result;
  }

  try {
    Json payload;
    if (kappa_cmd->parsed()) {
      payload = cmd_kappa(g, kappa, out);
    } else if (verify_cmd->parsed()) {
      payload = cmd_verify(g, verify, out);
    } else if (mf_cmd->parsed()) {
      payload = cmd_maxfilter(g, mf, out);
    } else if (sweep_cmd->parsed()) {
      payload = cmd_sweep(g, sweep, out);
    } else if (en_cmd->parsed()) {
      payload = cmd_enumerate(g, en, out);
    } else {
      payload = cmd_templates(g, tp, out);
    }
    if (g.tol_report) {
      payload["tolerances"] = tolerance_table();
      if (!g.json) {
        out << "tolerances:\n";
        for (const auto& [name, value] : payload["tolerances"].items()) {
          out << "  " << std::left << std::setw(32) << name << std::right << sci(value.get<double>()) << '\n';
        }
      }
    }
    result.payload = {{"status", "ok"}, {"result", payload}};
    if (g.json) out << result.payload.dump(2) << '\n';
    return result;
  } catch (const VerifyFailed& e) {
    result.status = Status::Error;
    result.exit_code = 1;
    result.payload = {{"status", "error"}, {"error", e.what()}, {"exit_code", 1}, {"result", e.payload()}};
    err << "error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    result.status = Status::Error;
    result.exit_code = exit_code_for(e);
    result.payload = {{"status", "error"}, {"error", e.what()}, {"exit_code", result.exit_code}};
    err << "error: " << e.what() << '\n';
  }
  if (g.json) out << result.payload.dump(2) << '\n';
  return result;
}

}  // namespace reflect::cli
