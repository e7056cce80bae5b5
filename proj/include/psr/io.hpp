#pragma once

#include <json.hpp>
#include <string>

#include "psr/curvature.hpp"
#include "psr/moduli.hpp"

namespace psr::io {

using json = nlohmann::ordered_json;

json to_json(const SymCubic& p);
json to_json(const AmbientCubic& h);
json to_json(const Mat& m);
json to_json(const Vec& v);
json to_json(const ReductionResult& r);
json to_json(const SphereMaxResult& r);
json to_json(const MembershipReport& r);
json to_json(const CurvatureReport& r);
json to_json(const HomogeneityResult& r);
json to_json(const BoundsEstimate& b);
json to_json(const SurfaceFixture& f);
json to_json(const DeformationCurve& c);

// Readers throw Error(MalformedInput) on schema violations.
SymCubic sym_cubic_from_json(const json& j);
AmbientCubic ambient_from_json(const json& j);
Mat matrix_from_json(const json& j);
Vec vector_from_json(const json& j);
ReductionResult reduction_from_json(const json& j);
SurfaceFixture fixture_from_json(const json& j);

// Accepts a SymCubic ("n"), a standard-form AmbientCubic ("m"), or any object
// carrying one under "standard" or "p3".
StandardCubic standard_from_json(const json& j);
// Accepts an AmbientCubic, a fixture ("ambient"), or a SymCubic read as the
// P3 of a standard form.
AmbientCubic any_ambient_from_json(const json& j);

json parse(const std::string& text);

// "%.17g"
std::string format_double(double v);

// Pretty JSON with every float written by format_double, so the text is
// identical across platforms and reads back exactly.
std::string dump(const json& j);

} // namespace psr::io
