#pragma once

#include <vector>

#include "psr/ambient.hpp"

namespace psr {

// Dense n^3 array, t(a, b, c) at (a * n + b) * n + c.
struct Tensor3 {
    int n = 0;
    std::vector<double> data;

    explicit Tensor3(int dim = 0) : n(dim), data(static_cast<size_t>(dim) * dim * dim, 0.0) {}
    double& operator()(int a, int b, int c) { return data[(static_cast<size_t>(a) * n + b) * n + c]; }
    double operator()(int a, int b, int c) const { return data[(static_cast<size_t>(a) * n + b) * n + c]; }
};

struct Tensor4 {
    int n = 0;
    std::vector<double> data;

    explicit Tensor4(int dim = 0) : n(dim), data(static_cast<size_t>(dim) * dim * dim * dim, 0.0) {}
    double& operator()(int a, int b, int c, int d)
    {
        return data[((static_cast<size_t>(a) * n + b) * n + c) * n + d];
    }
    double operator()(int a, int b, int c, int d) const
    {
        return data[((static_cast<size_t>(a) * n + b) * n + c) * n + d];
    }
};

// Curvature at the base point (1, 0) of a standard cubic, in the coordinates z.
// The metric there is (2 / tau) I.
double scalar_at_base(const SymCubic& p3, int tau = 3);
// r(i, j, k, l) = l-th component of R(d_i, d_j) d_k
Tensor4 riemann_at_base(const SymCubic& p3, int tau = 3);
// ric(j, k) = sum_i r(i, j, k, i), coded from the closed form directly.
Mat ricci_at_base(const SymCubic& p3, int tau = 3);
double sectional_at_base(const SymCubic& p3, const Vec& v, const Vec& w, int tau = 3);
// gamma(k, i, j) = Gamma^k_ij
Tensor3 christoffel_at_base(const SymCubic& p3);
// Differential of S at the base point, for tau = 3.
Vec ds_at_base(const SymCubic& p3);

double scalar_at(const StandardCubic& s, const Vec& z);

// Pullback of the centro-affine metric to dom(H) in the chart z.
Mat pullback_metric(const StandardCubic& s, const Vec& z);
// dg(k, i, j) = d_k g_ij
Tensor3 metric_derivative(const StandardCubic& s, const Vec& z);
Tensor3 christoffels_at(const StandardCubic& s, const Vec& z);

// Scalar curvature by central differences of pullback_metric, with one
// Richardson extrapolation step (h and h / 2).
double fd_scalar_oracle(const StandardCubic& s, const Vec& z, double step = 1e-4);

struct CurvatureReport {
    int tau = 3;
    Vec point;
    double scalar = 0.0;
    Mat ricci;           // chart coordinates at point
    Tensor3 christoffels; // chart coordinates at point
    SymCubic base_p3;    // standard form at point
    Mat chart_to_base;   // tangent map into the base coordinates of base_p3

    double sectional(const Vec& v, const Vec& w) const;
};

CurvatureReport curvature_report(const StandardCubic& s, const Vec& z, int tau = 3);

struct GeodesicSample {
    double t = 0.0;
    Vec z;
    Vec zdot;
    int chart = 0;
};

struct GeodesicOptions {
    // Move the chart to the current point once |z| exceeds this; <= 0 disables.
    double recenter_radius = 0.5;
    // Record every k-th step; 0 picks k so that about 1000 samples are kept.
    int sample_every = 0;
    // After each chart move, rescale P3 back onto the sphere-max bound if
    // rounding has pushed it past (long chart chains amplify such errors).
    bool clamp_to_generating_set = true;
    double exit_beta = 1e-10;
    double drift_tolerance = 1e-6;
    int max_halvings = 12;
};

struct GeodesicPath {
    std::vector<GeodesicSample> samples;
    double arc_length = 0.0;
    bool exited = false;
    double min_beta = 1.0;
    double max_speed_drift = 0.0; // relative to the initial metric speed
    int recenterings = 0;
    int clamps = 0;
};

GeodesicPath geodesic(const StandardCubic& s, const Vec& z0, const Vec& v0, double t_max, double dt = 1e-3,
                      const GeodesicOptions& opts = {});

} // namespace psr
