#pragma once

// JSON forms of specs and reports. Matrices are arrays of rows.

#include "reflect/asymptotics.hpp"
#include "reflect/char_poly.hpp"
#include "reflect/conditioning.hpp"
#include "reflect/maxfilter.hpp"

#include <json.hpp>

namespace reflect {

using Json = nlohmann::json;

Json matrix_to_json(const Matrix& m);
/// Throws DimensionMismatch for ragged rows.
Matrix matrix_from_json(const Json& j);
Json vector_to_json(const Vector& v);
Vector vector_from_json(const Json& j);

Family family_from_letter(char c);

/// {"components": [{"family": "A", "rank": 3}, {"family": "I", "order": 7},
///  {"trivial": 2}, {"diagram": [[1, 3], [3, 1]]}]}, or a plain spec string.
GroupSpec group_spec_from_json(const Json& j);
Json group_spec_to_json(const GroupSpec& spec);

void to_json(Json& j, const GroupSpec& spec);
void from_json(const Json& j, GroupSpec& spec);
void to_json(Json& j, const ComponentKappa& c);
void from_json(const Json& j, ComponentKappa& c);
void to_json(Json& j, const ConditionReport& r);
void from_json(const Json& j, ConditionReport& r);
void to_json(Json& j, const CheckResult& c);
void from_json(const Json& j, CheckResult& c);
void to_json(Json& j, const EigenIdentityResult& e);
void from_json(const Json& j, EigenIdentityResult& e);
void to_json(Json& j, const SpectralCheckReport& r);
void from_json(const Json& j, SpectralCheckReport& r);
void to_json(Json& j, const DualCertificate& c);
void from_json(const Json& j, DualCertificate& c);
void to_json(Json& j, const SweepPoint& p);
void from_json(const Json& j, SweepPoint& p);
void to_json(Json& j, const SweepReport& r);
void from_json(const Json& j, SweepReport& r);
void to_json(Json& j, const LipschitzEstimate& e);
void from_json(const Json& j, LipschitzEstimate& e);
void to_json(Json& j, const CharPolynomial& p);
/// Group, templates and their representatives as rows.
void to_json(Json& j, const MaxFilterBank& bank);
/// Rebuilds the bank from the group spec and templates.
void from_json(const Json& j, MaxFilterBank& bank);

}  // namespace reflect
