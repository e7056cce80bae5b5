#include "psr/domain.hpp"

#include <cmath>

namespace psr {

namespace {

constexpr double kTangentWindow = 1e-12;
// Directions with c up to this far above the bound count as tangent; matches
// the boundary tolerance of the membership trichotomy.
constexpr double kAdmissibleSlack = 1e-9;

double ray_poly(double c, double t) { return 1.0 - t * t + c * t * t * t; }
double ray_poly_d(double c, double t) { return -2.0 * t + 3.0 * c * t * t; }

} // namespace

double sphere_bound() { return 2.0 / (3.0 * std::sqrt(3.0)); }

double beta(const StandardCubic& s, const Vec& z)
{
    require_dim(z.size(), s.n(), "beta");
    return 1.0 - z.squaredNorm() + eval(s.p3(), z);
}

double alpha(const StandardCubic& s, const Vec& z)
{
    require_dim(z.size(), s.n(), "alpha");
    return 3.0 - z.squaredNorm();
}

Vec beta_gradient(const StandardCubic& s, const Vec& z)
{
    return -2.0 * z + gradient(s.p3(), z);
}

Mat beta_hessian(const StandardCubic& s, const Vec& z)
{
    const int n = s.n();
    return -2.0 * Mat::Identity(n, n) + 6.0 * contract(s.p3(), z);
}

double positive_root(double c)
{
    const double bound = sphere_bound();
    const double r3 = std::sqrt(3.0);
    if (c > bound + kAdmissibleSlack)
        fail(ErrorKind::NoPositiveRoot, "ray never leaves the domain (c above bound)");
    // Double root at sqrt(3): f = c (t - sqrt3)^2 (t + sqrt3/2).
    if (c >= bound - kTangentWindow)
        return r3;
    double lo = 0.0, hi = r3;
    while (hi - lo > 1e-13) {
        double mid = 0.5 * (lo + hi);
        if (ray_poly(c, mid) > 0)
            lo = mid;
        else
            hi = mid;
    }
    double t = 0.5 * (lo + hi);
    for (int it = 0; it < 3; ++it) {
        double d = ray_poly_d(c, t);
        if (d == 0.0)
            break;
        double next = t - ray_poly(c, t) / d;
        if (next < lo - 1e-13 || next > hi + 1e-13)
            break;
        if (std::abs(ray_poly(c, next)) >= std::abs(ray_poly(c, t)))
            break;
        t = next;
    }
    return t;
}

RayRoots ray_roots(const SymCubic& p3, const Vec& direction)
{
    require_dim(direction.size(), p3.n(), "ray_roots");
    double norm = direction.norm();
    if (norm == 0.0)
        fail(ErrorKind::InvalidArgument, "zero direction");
    RayRoots r;
    r.direction = direction / norm;
    r.c = eval(p3, r.direction);
    r.t_pos = positive_root(r.c);
    // f(-t) = 1 - t^2 - c t^3
    if (-r.c > sphere_bound() + kAdmissibleSlack)
        fail(ErrorKind::NoPositiveRoot, "opposite ray never leaves the domain (c below -bound)");
    r.t_neg = -positive_root(-r.c);
    return r;
}

bool dom_contains(const StandardCubic& s, const Vec& z)
{
    require_dim(z.size(), s.n(), "dom_contains");
    double norm = z.norm();
    if (norm == 0.0)
        return true;
    double c = eval(s.p3(), z / norm);
    if (c > sphere_bound() + kAdmissibleSlack)
        fail(ErrorKind::NotCCPSR, "section is unbounded along this direction");
    return norm < positive_root(c);
}

Vec phi(const StandardCubic& s, const Vec& z)
{
    double b = beta(s, z);
    if (!(b > 0.0) || !dom_contains(s, z))
        fail(ErrorKind::OutsideDomain, "point is not in dom(H)");
    Vec p(s.n() + 1);
    p[0] = 1.0;
    p.tail(s.n()) = z;
    return std::cbrt(1.0 / b) * p;
}

} // namespace psr
