#pragma once

#include "psr/ambient.hpp"

namespace psr {

struct ReductionResult {
    LinearChange change;   // A(p); change * e1 = base_point
    StandardCubic standard;
    Vec base_point;
    bool rescaled = false; // base_point was scaled onto {h = 1}
    double x_block_defect = 0.0;
};

// Reduces h to standard form around the hyperbolic point p. When rescale is
// set, p is first moved to h(p)^(-1/3) p; otherwise |h(p) - 1| > 1e-9 throws.
ReductionResult standard_form_at(const AmbientCubic& h, const Vec& p, bool rescale = true);

// Reduction of a standard cubic at phi(z) using the explicit shear-and-normalize
// matrix with first column phi(z).
ReductionResult move_point(const StandardCubic& s, const Vec& z);

// Differential of phi at z applied to v.
Vec phi_differential(const StandardCubic& s, const Vec& z, const Vec& v);

// dB0(v) = sum_i v_i B_i with each B_i antisymmetric.
class SoNDirectionField {
public:
    SoNDirectionField() = default;
    explicit SoNDirectionField(std::vector<Mat> generators);
    static SoNDirectionField zero(int n);

    int n() const { return n_; }
    const std::vector<Mat>& generators() const { return generators_; }
    Mat apply(const Vec& v) const;

private:
    int n_ = 0;
    std::vector<Mat> generators_;
};

// y -> -(2/3)<y,y><y,v> + 3 P(y, y, dB0(v) y + (3/2) P(y, ., v))
SymCubic delta_p3(const StandardCubic& s, const SoNDirectionField& db0, const Vec& v);

} // namespace psr
