#pragma once

#include "psr/symtensor.hpp"

namespace psr {

// Cubic homogeneous polynomial h on R^m, m = n + 1.
class AmbientCubic {
public:
    AmbientCubic() = default;
    explicit AmbientCubic(SymCubic tensor) : tensor_(std::move(tensor)) {}

    int m() const { return tensor_.n(); }
    const SymCubic& tensor() const { return tensor_; }

private:
    SymCubic tensor_;
};

double eval(const AmbientCubic& h, const Vec& p);
Vec gradient(const AmbientCubic& h, const Vec& p);
Mat hessian(const AmbientCubic& h, const Vec& p);

struct HyperbolicityInfo {
    bool hyperbolic = false;
    bool degenerate = false; // some eigenvalue of -d2h within tolerance of zero
    int negative = 0;
    int positive = 0;
    double h_value = 0.0;
    Vec eigenvalues; // of -d2h_p, ascending
};

HyperbolicityInfo hyperbolicity(const AmbientCubic& h, const Vec& p);
bool is_hyperbolic_point(const AmbientCubic& h, const Vec& p);

// h((x, y)) = x^3 - x<y, y> + P3(y)
class StandardCubic {
public:
    StandardCubic() = default;
    explicit StandardCubic(SymCubic p3) : p3_(std::move(p3)) {}

    int n() const { return p3_.n(); }
    const SymCubic& p3() const { return p3_; }

    AmbientCubic to_ambient() const;
    // Throws InvalidArgument unless h has the standard x-block within tol.
    static StandardCubic from_ambient(const AmbientCubic& h, double tol = 1e-9);
    // Largest deviation of the x-block of h from the standard one.
    static double x_block_defect(const AmbientCubic& h);

private:
    SymCubic p3_;
};

class LinearChange {
public:
    LinearChange() = default;
    explicit LinearChange(Mat matrix);
    static LinearChange identity(int m);

    int m() const { return static_cast<int>(matrix_.rows()); }
    const Mat& matrix() const { return matrix_; }
    const Mat& inverse() const { return inverse_; }
    Vec apply(const Vec& v) const { return matrix_ * v; }
    LinearChange then(const LinearChange& inner) const { return LinearChange(matrix_ * inner.matrix_); }

private:
    Mat matrix_;
    Mat inverse_;
};

// h o A
AmbientCubic apply_change(const AmbientCubic& h, const LinearChange& a);

} // namespace psr
