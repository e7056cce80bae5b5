#pragma once

#include <cstdint>
#include <vector>

#include "psr/ambient.hpp"

namespace psr {

constexpr double kBoundaryTolerance = 1e-9;

struct SphereMaxResult {
    double max_value = 0.0;
    Vec argmax;
    double kkt_residual = 0.0;
    int starts_used = 0;
    bool converged = true;
};

struct SphereMaxOptions {
    int workers = 1;
    // When false an unconverged run is returned with converged = false.
    bool throw_on_failure = true;
};

int default_starts(int n);

// Maximum of P3 over the unit sphere by seeded multistart ascent.
SphereMaxResult max_on_sphere(const SymCubic& p3, std::uint64_t seed, int starts,
                              const SphereMaxOptions& opts = {});

// Values at the converged end points of every start (ascent plus Newton),
// one entry per start, in start order.
std::vector<SphereMaxResult> sphere_ascent_endpoints(const SymCubic& p3, std::uint64_t seed, int starts);

enum class Position { Interior, Boundary, Outside };
const char* position_name(Position p);

struct MembershipReport {
    SphereMaxResult sphere_max;
    bool is_closed_ccpsr = false;
    bool singular_at_infinity = false;
    bool regular_boundary = false;
    Position generating_set_position = Position::Outside;
};

// starts <= 0 selects default_starts(n).
MembershipReport classify(const SymCubic& p3, std::uint64_t seed, int starts = 0, int workers = 1);

// 3 I - 9 P(z, ., .) + z z^T
Mat hyperbolicity_form(const StandardCubic& s, const Vec& z);

struct EigenRangeReport {
    double min_eigenvalue = 0.0;
    double max_eigenvalue = 0.0;
    int samples = 0;
    bool within_bounds = true; // all in (-5/6 - 1e-9, 2/3 + 1e-9)
};

EigenRangeReport eigen_range_check(const StandardCubic& s, int samples, std::uint64_t seed);

} // namespace psr
