#include "reflect/serialize.hpp"

#include <cctype>
#include <limits>

namespace reflect {

namespace {

Atom atom_from_json(const Json& j) {
  if (!j.is_object()) throw UsageError("group component must be an object");
  if (j.contains("trivial")) return Trivial{j.at("trivial").get<int>()};
  if (j.contains("diagram")) {
    const Json& rows = j.at("diagram");
    const auto n = static_cast<int>(rows.size());
    Eigen::MatrixXi orders(n, n);
    for (int r = 0; r < n; ++r) {
      if (rows[r].size() != static_cast<std::size_t>(n)) throw DimensionMismatch("Coxeter matrix must be square");
      for (int c = 0; c < n; ++c) orders(r, c) = rows[r][c].get<int>();
    }
    return ExplicitDiagram{CoxeterMatrix(orders)};
  }
  const std::string letter = j.at("family").get<std::string>();
  if (letter.size() != 1) throw UsageError("family must be a single letter");
  const Family family = family_from_letter(letter[0]);
  const char* key = family == Family::I && j.contains("order") ? "order" : "rank";
  return NamedFamily{family, j.at(key).get<int>()};
}

Json atom_to_json(const Atom& atom) {
  if (const auto* t = std::get_if<Trivial>(&atom)) return {{"trivial", t->dim}};
  if (const auto* nf = std::get_if<NamedFamily>(&atom)) {
    const char* key = nf->family == Family::I ? "order" : "rank";
    return {{"family", std::string(1, family_letter(nf->family))}, {key, nf->parameter}};
  }
  const auto& cm = std::get<ExplicitDiagram>(atom).matrix;
  Json rows = Json::array();
  for (int r = 0; r < cm.rank(); ++r) {
    Json row = Json::array();
    for (int c = 0; c < cm.rank(); ++c) row.push_back(cm(r, c));
    rows.push_back(row);
  }
  return {{"diagram", rows}};
}

Json pair_to_json(const std::pair<Vector, Vector>& p) {
  return {{"x", vector_to_json(p.first)}, {"y", vector_to_json(p.second)}};
}

std::pair<Vector, Vector> pair_from_json(const Json& j) {
  return {vector_from_json(j.at("x")), vector_from_json(j.at("y"))};
}

}  // namespace

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array()) throw UsageError("matrix must be an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows == 0 ? 0 : static_cast<Eigen::Index>(j[0].size());
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (static_cast<Eigen::Index>(j[r].size()) != cols) throw DimensionMismatch("ragged matrix rows");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = j[r][c].get<double>();
  }
  return m;
}

Json vector_to_json(const Vector& v) { return Json(std::vector<double>(v.data(), v.data() + v.size())); }

Vector vector_from_json(const Json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

Family family_from_letter(char c) {
  switch (std::toupper(static_cast<unsigned char>(c))) {
    case 'A':
      return Family::A;
    case 'B':
      return Family::B;
    case 'D':
      return Family::D;
    case 'E':
      return Family::E;
    case 'F':
      return Family::F;
    case 'H':
      return Family::H;
    case 'I':
      return Family::I;
    default:
      break;
  }
  throw RangeError(std::string("unknown family '") + c + "'");
}

GroupSpec group_spec_from_json(const Json& j) {
  try {
    if (j.is_string()) return parse_group_spec(j.get<std::string>());
    GroupSpec spec;
    for (const auto& item : j.at("components")) spec.components.push_back(atom_from_json(item));
    if (spec.components.empty()) throw UsageError("group spec has no components");
    for (const auto& atom : spec.components) validate_atom(atom);
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("malformed group spec JSON: ") + e.what());
  }
}

Json group_spec_to_json(const GroupSpec& spec) {
  Json components = Json::array();
  for (const auto& atom : spec.components) components.push_back(atom_to_json(atom));
  return {{"text", render(spec)}, {"components", components}};
}

void to_json(Json& j, const GroupSpec& spec) { j = group_spec_to_json(spec); }
void from_json(const Json& j, GroupSpec& spec) { spec = group_spec_from_json(j); }

void to_json(Json& j, const ComponentKappa& c) {
  j = {{"atom", c.label}, {"kappa", c.kappa}, {"sigma_max", c.sigma_max}, {"sigma_min", c.sigma_min},
       {"trivial", c.trivial}};
}

void from_json(const Json& j, ComponentKappa& c) {
  c.label = j.at("atom").get<std::string>();
  c.kappa = j.at("kappa").get<double>();
  c.sigma_max = j.at("sigma_max").get<double>();
  c.sigma_min = j.at("sigma_min").get<double>();
  c.trivial = j.at("trivial").get<bool>();
}

void to_json(Json& j, const ConditionReport& r) {
  j = {{"group", r.spec},
       {"kappa", r.kappa},
       {"sigma_max", r.sigma_max},
       {"sigma_min", r.sigma_min},
       {"per_component", r.per_component},
       {"argmax_component", r.argmax_component},
       {"templates", matrix_to_json(r.templates)},
       {"notes", r.notes}};
}

void from_json(const Json& j, ConditionReport& r) {
  r.spec = j.at("group").get<GroupSpec>();
  r.kappa = j.at("kappa").get<double>();
  r.sigma_max = j.at("sigma_max").get<double>();
  r.sigma_min = j.at("sigma_min").get<double>();
  r.per_component = j.at("per_component").get<std::vector<ComponentKappa>>();
  r.argmax_component = j.at("argmax_component").get<std::size_t>();
  r.templates = matrix_from_json(j.at("templates"));
  r.notes = j.at("notes").get<std::vector<std::string>>();
}

void to_json(Json& j, const CheckResult& c) {
  j = {{"residual", c.residual}, {"tolerance", c.tolerance}, {"pass", c.pass()}};
}

void from_json(const Json& j, CheckResult& c) {
  c.residual = j.at("residual").get<double>();
  c.tolerance = j.at("tolerance").get<double>();
}

void to_json(Json& j, const EigenIdentityResult& e) {
  j = {{"residual", e.residual}, {"evaluated", e.evaluated}, {"skipped", e.skipped}};
}

void from_json(const Json& j, EigenIdentityResult& e) {
  e.residual = j.at("residual").get<double>();
  e.evaluated = j.at("evaluated").get<int>();
  e.skipped = j.at("skipped").get<int>();
}

void to_json(Json& j, const SpectralCheckReport& r) {
  j = {{"group", r.group},
       {"check_a", r.squared_entries},
       {"check_b", r.spectrum_symmetry},
       {"check_c", r.minor_symmetry},
       {"eigen_identity", r.eigen_identity},
       {"eigen_identity_tolerance", r.eigen_identity_tolerance},
       {"pass", r.pass()}};
}

void from_json(const Json& j, SpectralCheckReport& r) {
  r.group = j.at("group").get<std::string>();
  r.squared_entries = j.at("check_a").get<CheckResult>();
  r.spectrum_symmetry = j.at("check_b").get<CheckResult>();
  r.minor_symmetry = j.at("check_c").get<CheckResult>();
  r.eigen_identity = j.at("eigen_identity").get<EigenIdentityResult>();
  r.eigen_identity_tolerance = j.at("eigen_identity_tolerance").get<double>();
}

void to_json(Json& j, const DualCertificate& c) {
  j = {{"c_star", c.c_star},
       {"alpha", c.alpha},
       {"Y", matrix_to_json(c.y)},
       {"Z", matrix_to_json(c.z)},
       {"lambda_top", c.lambda_top},
       {"lambda_bottom", c.lambda_bottom},
       {"gap_scalar", c.gap_scalar},
       {"gap_diag", c.gap_diag},
       {"feasibility",
        {{"nuclear_norm_Y", c.nuclear_norm_y},
         {"diag_residual", c.diag_residual},
         {"copositivity_margin", c.copositivity_margin},
         {"copositivity_samples", c.copositivity_samples}}},
       {"kappa_from_alpha", c.kappa_from_alpha},
       {"kappa_svd", c.kappa_svd},
       {"violation", c.first_violation()}};
}

void from_json(const Json& j, DualCertificate& c) {
  c.c_star = j.at("c_star").get<double>();
  c.alpha = j.at("alpha").get<double>();
  c.y = matrix_from_json(j.at("Y"));
  c.z = matrix_from_json(j.at("Z"));
  c.lambda_top = j.at("lambda_top").get<double>();
  c.lambda_bottom = j.at("lambda_bottom").get<double>();
  c.gap_scalar = j.at("gap_scalar").get<double>();
  c.gap_diag = j.at("gap_diag").get<double>();
  const Json& f = j.at("feasibility");
  c.nuclear_norm_y = f.at("nuclear_norm_Y").get<double>();
  c.diag_residual = f.at("diag_residual").get<double>();
  c.copositivity_margin = f.at("copositivity_margin").get<double>();
  c.copositivity_samples = f.at("copositivity_samples").get<std::size_t>();
  c.kappa_from_alpha = j.at("kappa_from_alpha").get<double>();
  c.kappa_svd = j.at("kappa_svd").get<double>();
}

void to_json(Json& j, const SweepPoint& p) {
  j = {{"ell", p.ell}, {"kappa", p.kappa}, {"kappa_over_ell", p.kappa_over_ell}};
}

void from_json(const Json& j, SweepPoint& p) {
  p.ell = j.at("ell").get<int>();
  p.kappa = j.at("kappa").get<double>();
  p.kappa_over_ell = j.at("kappa_over_ell").get<double>();
}

void to_json(Json& j, const SweepReport& r) {
  j = {{"family", std::string(1, family_letter(r.family))},
       {"points", r.points},
       {"limit_constant", r.limit_constant},
       {"max_relative_gap_at_tail", r.max_relative_gap_at_tail}};
}

void from_json(const Json& j, SweepReport& r) {
  r.family = family_from_letter(j.at("family").get<std::string>().at(0));
  r.points = j.at("points").get<std::vector<SweepPoint>>();
  r.limit_constant = j.at("limit_constant").get<double>();
  r.max_relative_gap_at_tail = j.at("max_relative_gap_at_tail").get<double>();
}

void to_json(Json& j, const LipschitzEstimate& e) {
  j = {{"lower", e.lower},
       {"upper", e.upper},
       {"samples", e.samples},
       {"sigma_min", e.sigma_min},
       {"sigma_max", e.sigma_max},
       {"argmin_pair", pair_to_json(e.argmin_pair)},
       {"argmax_pair", pair_to_json(e.argmax_pair)}};
}

void from_json(const Json& j, LipschitzEstimate& e) {
  e.lower = j.at("lower").get<double>();
  e.upper = j.at("upper").get<double>();
  e.samples = j.at("samples").get<std::size_t>();
  e.sigma_min = j.at("sigma_min").get<double>();
  e.sigma_max = j.at("sigma_max").get<double>();
  e.argmin_pair = pair_from_json(j.at("argmin_pair"));
  e.argmax_pair = pair_from_json(j.at("argmax_pair"));
}

void to_json(Json& j, const CharPolynomial& p) {
  Json coefficients = Json::array();
  for (auto it = p.coefficients.rbegin(); it != p.coefficients.rend(); ++it) {
    if (*it >= std::numeric_limits<long long>::min() && *it <= std::numeric_limits<long long>::max()) {
      coefficients.push_back(static_cast<long long>(*it));
    } else {
      coefficients.push_back(it->str());
    }
  }
  j = {{"family", std::string(1, family_letter(p.family))},
       {"ell", p.ell},
       {"coefficients_descending", coefficients},
       {"polynomial", p.to_string()},
       {"parity", parity_name(p.parity)},
       {"trace", p.trace}};
}

void to_json(Json& j, const MaxFilterBank& bank) {
  Json templates = Json::array();
  Json reps = Json::array();
  for (const auto& t : bank.templates) templates.push_back(vector_to_json(t));
  for (const auto& r : bank.reps) reps.push_back(vector_to_json(r));
  j = {{"group", bank.fs.spec}, {"templates", templates}, {"reps", reps}};
}

void from_json(const Json& j, MaxFilterBank& bank) {
  std::vector<Vector> templates;
  for (const auto& t : j.at("templates")) templates.push_back(vector_from_json(t));
  bank = make_bank(fundamental_system(j.at("group").get<GroupSpec>()), std::move(templates));
}

}  // namespace reflect
