#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "psr/membership.hpp"
#include "psr/standard_form.hpp"

namespace psr {

Position generating_set_position(const SymCubic& p3, std::uint64_t seed);

struct DeformationSample {
    double t = 0.0;
    StandardCubic form;
    MembershipReport report;
};

struct DeformationCurve {
    StandardCubic from;
    StandardCubic to;
    std::vector<DeformationSample> samples;
    bool all_closed = true;
};

// Samples (1 - t) a + t b at k equispaced t in [0, 1].
DeformationCurve deform(const StandardCubic& a, const StandardCubic& b, int k_samples, std::uint64_t seed);

StandardCubic scale_path(const SymCubic& p3, double s);

struct HomogeneityResult {
    bool is_homogeneous = false;
    SoNDirectionField db0;
    double residual = 0.0;
};

HomogeneityResult homogeneity_test(const SymCubic& p3);

struct BoundsEstimate {
    double l_hat = 0.0;
    double u_hat = 0.0;
    SymCubic witness_lower;
    SymCubic witness_upper;
    int candidates = 0;
};

BoundsEstimate curvature_bounds_estimate(int n, int budget, std::uint64_t seed, int workers = 1);

enum class FixtureKind { A, B, C, D, E, F };

FixtureKind parse_fixture_kind(const std::string& s);
std::string fixture_kind_name(FixtureKind k);

struct SurfaceFixture {
    FixtureKind kind = FixtureKind::A;
    AmbientCubic ambient;
    LinearChange change;
    StandardCubic standard;
    std::optional<double> b_param;
};

// Kind F requires b_param in (-1, 1).
SurfaceFixture surface_fixture(FixtureKind kind, std::optional<double> b_param = std::nullopt);

// Secondary fixture: the limit b -> -1 of family f, 2/(3 sqrt3) y^3, carried to
// the e-form by a non-orthogonal change.
SurfaceFixture limit_to_e_fixture();

} // namespace psr
