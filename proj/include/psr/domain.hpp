#pragma once

#include "psr/ambient.hpp"

namespace psr {

// Largest admissible value of P3 on the unit sphere, 2 / (3 sqrt 3).
double sphere_bound();

// beta(z) = h((1, z)), alpha(z) = d_x h at (1, z).
double beta(const StandardCubic& s, const Vec& z);
double alpha(const StandardCubic& s, const Vec& z);
Vec beta_gradient(const StandardCubic& s, const Vec& z);
Mat beta_hessian(const StandardCubic& s, const Vec& z);

// Roots of f(t) = 1 - t^2 + c t^3 along a ray.
struct RayRoots {
    Vec direction;
    double c = 0.0;
    double t_pos = 0.0; // smallest positive root
    double t_neg = 0.0; // largest negative root
};

// Smallest positive root of 1 - t^2 + c t^3; requires c <= sphere_bound().
double positive_root(double c);
RayRoots ray_roots(const SymCubic& p3, const Vec& direction);

bool dom_contains(const StandardCubic& s, const Vec& z);
// beta(z)^(-1/3) (1, z)
Vec phi(const StandardCubic& s, const Vec& z);

} // namespace psr
