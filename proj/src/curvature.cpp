#include "psr/curvature.hpp"

#include <cmath>
#include <memory>

#include "psr/domain.hpp"
#include "psr/membership.hpp"
#include "psr/standard_form.hpp"

namespace psr {

namespace {

void check_tau(int tau)
{
    if (tau < 3)
        fail(ErrorKind::InvalidArgument, "tau must be >= 3");
}

// t_l = sum_a P_aal
Vec trace_vector(const SymCubic& p)
{
    const int n = p.n();
    Vec t = Vec::Zero(n);
    for (int l = 0; l < n; ++l)
        for (int a = 0; a < n; ++a)
            t[l] += p.entry(a, a, l);
    return t;
}

// P(u, v, .)
Vec partial(const SymCubic& p, const Vec& u, const Vec& v) { return contract(p, u) * v; }

} // namespace

double scalar_at_base(const SymCubic& p3, int tau)
{
    check_tau(tau);
    const int n = p3.n();
    Vec t = trace_vector(p3);
    double sq = 0.0;
    for (double v : p3.tensor())
        sq += v * v;
    return n * (1.0 - n) + (9.0 * tau / 8.0) * (-t.squaredNorm() + sq);
}

Tensor4 riemann_at_base(const SymCubic& p3, int tau)
{
    check_tau(tau);
    const int n = p3.n();
    Tensor4 r(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    double v = (2.0 / tau) * ((i == k ? 1.0 : 0.0) * (j == l ? 1.0 : 0.0) -
                                              (j == k ? 1.0 : 0.0) * (i == l ? 1.0 : 0.0));
                    double s = 0.0;
                    for (int a = 0; a < n; ++a)
                        s += -p3.entry(i, l, a) * p3.entry(j, k, a) + p3.entry(i, k, a) * p3.entry(j, l, a);
                    r(i, j, k, l) = v + 2.25 * s;
                }
    return r;
}

Mat ricci_at_base(const SymCubic& p3, int tau)
{
    check_tau(tau);
    const int n = p3.n();
    Vec t = trace_vector(p3);
    Mat ric = (2.0 * (1.0 - n) / tau) * Mat::Identity(n, n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            double s = 0.0;
            for (int a = 0; a < n; ++a) {
                s -= t[a] * p3.entry(j, k, a);
                for (int i = 0; i < n; ++i)
                    s += p3.entry(i, j, a) * p3.entry(i, k, a);
            }
            ric(j, k) += 2.25 * s;
        }
    return ric;
}

double sectional_at_base(const SymCubic& p3, const Vec& v, const Vec& w, int tau)
{
    check_tau(tau);
    require_dim(v.size(), p3.n(), "sectional v");
    require_dim(w.size(), p3.n(), "sectional w");
    double nv = v.norm();
    if (nv == 0.0)
        fail(ErrorKind::DegeneratePlane, "zero vector");
    Vec f1 = v / nv;
    Vec r = w - w.dot(f1) * f1;
    if (r.norm() <= 1e-12 * std::max(1.0, w.norm()))
        fail(ErrorKind::DegeneratePlane, "vectors are linearly dependent");
    Vec f2 = r.normalized();
    double q = -partial(p3, f1, f1).dot(partial(p3, f2, f2)) + partial(p3, f1, f2).squaredNorm();
    return -1.0 + (9.0 * tau / 8.0) * q;
}

Tensor3 christoffel_at_base(const SymCubic& p3)
{
    const int n = p3.n();
    Tensor3 g(n);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                g(k, i, j) = -1.5 * p3.entry(i, j, k);
    return g;
}

Vec ds_at_base(const SymCubic& p3)
{
    const int n = p3.n();
    Vec t = trace_vector(p3);
    // q(j, l) = -t_j t_l - 2 sum_i t_i P_ijl + 3 sum_{a,i} P_aij P_ail
    Mat ct = contract(p3, t);
    Mat q(n, n);
    for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) {
            double s = 0.0;
            for (int a = 0; a < n; ++a)
                for (int i = 0; i < n; ++i)
                    s += p3.entry(a, i, j) * p3.entry(a, i, l);
            q(j, l) = -t[j] * t[l] - 2.0 * ct(j, l) + 3.0 * s;
        }
    Vec ds(n);
    for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int j = 0; j < n; ++j)
            for (int l = 0; l < n; ++l)
                s += p3.entry(j, l, k) * q(j, l);
        ds[k] = 1.5 * (n - 1) * t[k] + (81.0 / 8.0) * s;
    }
    return ds;
}

double scalar_at(const StandardCubic& s, const Vec& z)
{
    return scalar_at_base(move_point(s, z).standard.p3());
}

Mat pullback_metric(const StandardCubic& s, const Vec& z)
{
    double b = beta(s, z);
    if (!(b > 0.0))
        fail(ErrorKind::OutsideDomain, "beta(z) <= 0");
    Vec d = beta_gradient(s, z);
    return -beta_hessian(s, z) / (3.0 * b) + (2.0 / (9.0 * b * b)) * d * d.transpose();
}

Tensor3 metric_derivative(const StandardCubic& s, const Vec& z)
{
    double b = beta(s, z);
    if (!(b > 0.0))
        fail(ErrorKind::OutsideDomain, "beta(z) <= 0");
    const int n = s.n();
    Vec d = beta_gradient(s, z);
    Mat h = beta_hessian(s, z);
    Tensor3 dg(n);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                dg(k, i, j) = -6.0 * s.p3().entry(i, j, k) / (3.0 * b) + h(i, j) * d[k] / (3.0 * b * b) +
                              2.0 * (h(i, k) * d[j] + d[i] * h(j, k)) / (9.0 * b * b) -
                              4.0 * d[i] * d[j] * d[k] / (9.0 * b * b * b);
    return dg;
}

Tensor3 christoffels_at(const StandardCubic& s, const Vec& z)
{
    const int n = s.n();
    Mat ginv = pullback_metric(s, z).inverse();
    Tensor3 dg = metric_derivative(s, z);
    Tensor3 gam(n);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double acc = 0.0;
                for (int l = 0; l < n; ++l)
                    acc += ginv(k, l) * (dg(i, j, l) + dg(j, i, l) - dg(l, i, j));
                gam(k, i, j) = 0.5 * acc;
            }
    return gam;
}

namespace {

// Metric scaled by tau = 3, as used inside the oracle.
Mat oracle_metric(const StandardCubic& s, const Vec& z)
{
    if (!(beta(s, z) > 0.0) || !dom_contains(s, z))
        fail(ErrorKind::StencilExit, "finite-difference stencil leaves dom(H)");
    return 3.0 * pullback_metric(s, z);
}

Tensor3 fd_christoffels(const StandardCubic& s, const Vec& z, double h)
{
    const int n = s.n();
    std::vector<Mat> dg(n);
    for (int k = 0; k < n; ++k) {
        Vec e = Vec::Unit(n, k) * h;
        dg[k] = (oracle_metric(s, z + e) - oracle_metric(s, z - e)) / (2.0 * h);
    }
    Mat ginv = oracle_metric(s, z).inverse();
    Tensor3 gam(n);
    for (int r = 0; r < n; ++r)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double acc = 0.0;
                for (int l = 0; l < n; ++l)
                    acc += ginv(r, l) * (dg[i](l, j) + dg[j](l, i) - dg[l](i, j));
                gam(r, i, j) = 0.5 * acc;
            }
    return gam;
}

double fd_scalar_once(const StandardCubic& s, const Vec& z, double h)
{
    const int n = s.n();
    Tensor3 gam = fd_christoffels(s, z, h);
    // dgam[m](r, i, j) = d_m Gamma^r_ij
    std::vector<Tensor3> dgam;
    for (int m = 0; m < n; ++m) {
        Vec e = Vec::Unit(n, m) * h;
        Tensor3 plus = fd_christoffels(s, z + e, h);
        Tensor3 minus = fd_christoffels(s, z - e, h);
        Tensor3 d(n);
        for (size_t q = 0; q < d.data.size(); ++q)
            d.data[q] = (plus.data[q] - minus.data[q]) / (2.0 * h);
        dgam.push_back(std::move(d));
    }
    // R^r_{s m v} = d_m G^r_{v s} - d_v G^r_{m s} + G^r_{m l} G^l_{v s} - G^r_{v l} G^l_{m s}
    // Ric_{s v} = R^r_{s r v}
    Mat ric = Mat::Zero(n, n);
    for (int sg = 0; sg < n; ++sg)
        for (int nu = 0; nu < n; ++nu) {
            double acc = 0.0;
            for (int r = 0; r < n; ++r) {
                acc += dgam[r](r, nu, sg) - dgam[nu](r, r, sg);
                for (int l = 0; l < n; ++l)
                    acc += gam(r, r, l) * gam(l, nu, sg) - gam(r, nu, l) * gam(l, r, sg);
            }
            ric(sg, nu) = acc;
        }
    Mat ginv = oracle_metric(s, z).inverse();
    // The oracle metric is 3 times the pullback metric.
    return 3.0 * (ginv.cwiseProduct(ric)).sum();
}

} // namespace

double fd_scalar_oracle(const StandardCubic& s, const Vec& z, double step)
{
    require_dim(z.size(), s.n(), "fd_scalar_oracle");
    if (!(beta(s, z) > 0.0) || !dom_contains(s, z))
        fail(ErrorKind::OutsideDomain, "point is not in dom(H)");
    double coarse = fd_scalar_once(s, z, step);
    double fine = fd_scalar_once(s, z, 0.5 * step);
    return (4.0 * fine - coarse) / 3.0;
}

double CurvatureReport::sectional(const Vec& v, const Vec& w) const
{
    return sectional_at_base(base_p3, chart_to_base * v, chart_to_base * w, tau);
}

CurvatureReport curvature_report(const StandardCubic& s, const Vec& z, int tau)
{
    check_tau(tau);
    const int n = s.n();
    ReductionResult red = move_point(s, z);
    CurvatureReport r;
    r.tau = tau;
    r.point = z;
    r.base_p3 = red.standard.p3();
    r.chart_to_base = Mat(n, n);
    for (int i = 0; i < n; ++i)
        r.chart_to_base.col(i) = (red.change.inverse() * phi_differential(s, z, Vec::Unit(n, i))).tail(n);
    r.scalar = scalar_at_base(r.base_p3, tau);
    r.ricci = r.chart_to_base.transpose() * ricci_at_base(r.base_p3, tau) * r.chart_to_base;
    r.christoffels = christoffels_at(s, z);
    return r;
}

namespace {

using SVec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 16, 1>;
using SMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 16, 16>;

// Geodesic right-hand side z'' = -Gamma(z)(z', z') without heap traffic.
class GeodesicField {
public:
    explicit GeodesicField(const SymCubic& p) : n_(p.n()), p_(p.tensor()) {}

    // Returns false when beta <= floor.
    bool accel(const SVec& z, const SVec& v, SVec& a, double floor, double* beta_out = nullptr) const
    {
        const int n = n_;
        SMat cz(n, n);
        contract_into(z, cz);
        SVec czz = cz * z;
        double b = 1.0 - z.squaredNorm() + z.dot(czz);
        if (beta_out)
            *beta_out = b;
        if (!(b > floor))
            return false;
        SVec d = -2.0 * z + 3.0 * czz;
        SMat dd = 6.0 * cz;
        dd.diagonal().array() -= 2.0;
        SMat cv(n, n);
        contract_into(v, cv);
        SVec pvv = cv * v;
        double dv = d.dot(v);
        SVec ddv = dd * v;
        double vddv = v.dot(ddv);
        double b2 = b * b, b3 = b2 * b;
        SVec w(n);
        for (int l = 0; l < n; ++l) {
            double t = 6.0 * pvv[l];
            double first = -t / (3.0 * b) + ddv[l] * dv / (3.0 * b2) + 2.0 * (vddv * d[l] + dv * ddv[l]) / (9.0 * b2) -
                           4.0 * dv * dv * d[l] / (9.0 * b3);
            double second = -t / (3.0 * b) + vddv * d[l] / (3.0 * b2) + 4.0 * ddv[l] * dv / (9.0 * b2) -
                            4.0 * dv * dv * d[l] / (9.0 * b3);
            w[l] = first - 0.5 * second;
        }
        SMat g = -dd / (3.0 * b) + (2.0 / (9.0 * b2)) * d * d.transpose();
        a = -g.llt().solve(w);
        return a.allFinite();
    }

    double speed(const SVec& z, const SVec& v) const
    {
        const int n = n_;
        SMat cz(n, n);
        contract_into(z, cz);
        SVec czz = cz * z;
        double b = 1.0 - z.squaredNorm() + z.dot(czz);
        SVec d = -2.0 * z + 3.0 * czz;
        SMat dd = 6.0 * cz;
        dd.diagonal().array() -= 2.0;
        double dv = d.dot(v);
        double q = -v.dot(dd * v) / (3.0 * b) + 2.0 * dv * dv / (9.0 * b * b);
        return std::sqrt(std::max(q, 0.0));
    }

private:
    void contract_into(const SVec& z, SMat& out) const
    {
        const int n = n_;
        for (int a = 0; a < n; ++a)
            for (int b = a; b < n; ++b) {
                double s = 0.0;
                for (int c = 0; c < n; ++c)
                    s += p_[(a * n + b) * n + c] * z[c];
                out(a, b) = s;
                out(b, a) = s;
            }
    }

    int n_;
    const std::vector<double>& p_;
};

bool rk4_step(const GeodesicField& f, SVec& z, SVec& v, double h, double floor)
{
    const int n = static_cast<int>(z.size());
    SVec a1(n), a2(n), a3(n), a4(n);
    if (!f.accel(z, v, a1, floor))
        return false;
    SVec z2 = z + 0.5 * h * v, v2 = v + 0.5 * h * a1;
    if (!f.accel(z2, v2, a2, floor))
        return false;
    SVec z3 = z + 0.5 * h * v2, v3 = v + 0.5 * h * a2;
    if (!f.accel(z3, v3, a3, floor))
        return false;
    SVec z4 = z + h * v3, v4 = v + h * a3;
    if (!f.accel(z4, v4, a4, floor))
        return false;
    z += (h / 6.0) * (v + 2.0 * v2 + 2.0 * v3 + v4);
    v += (h / 6.0) * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
    return true;
}

} // namespace

GeodesicPath geodesic(const StandardCubic& s, const Vec& z0, const Vec& v0, double t_max, double dt,
                      const GeodesicOptions& opts)
{
    const int n = s.n();
    require_dim(z0.size(), n, "geodesic z0");
    require_dim(v0.size(), n, "geodesic v0");
    if (n > 16)
        fail(ErrorKind::InvalidArgument, "geodesic integration supports n <= 16");
    if (!(dt > 0.0) || !(t_max >= 0.0))
        fail(ErrorKind::InvalidArgument, "need dt > 0 and t_max >= 0");
    if (v0.norm() == 0.0)
        fail(ErrorKind::InvalidArgument, "v0 must be nonzero");
    if (!(beta(s, z0) > 0.0) || !dom_contains(s, z0))
        fail(ErrorKind::OutsideDomain, "start point is not in dom(H)");

    StandardCubic chart = s;
    auto field = std::make_unique<GeodesicField>(chart.p3());
    SVec z = z0, v = v0;
    const double speed0 = field->speed(z, v);
    const long total_steps = static_cast<long>(std::ceil(t_max / dt));
    const long every = opts.sample_every > 0 ? opts.sample_every : std::max(1L, total_steps / 1000);

    GeodesicPath path;
    path.min_beta = beta(s, z0);
    auto record = [&](double t, int chart_id) { path.samples.push_back({t, Vec(z), Vec(v), chart_id}); };
    record(0.0, 0);

    double t = 0.0;
    long step = 0;
    int chart_id = 0;
    while (t < t_max && !path.exited) {
        double h = std::min(dt, t_max - t);
        SVec zn, vn;
        bool ok = false;
        double drift = 0.0;
        for (int halvings = 0; halvings <= opts.max_halvings; ++halvings) {
            zn = z;
            vn = v;
            ok = rk4_step(*field, zn, vn, h, opts.exit_beta);
            if (ok) {
                drift = std::abs(field->speed(zn, vn) - speed0) / speed0;
                if (drift <= opts.drift_tolerance)
                    break;
            }
            if (halvings < opts.max_halvings)
                h *= 0.5;
        }
        if (!ok) {
            path.exited = true;
            break;
        }
        z = zn;
        v = vn;
        t += h;
        ++step;
        path.arc_length += speed0 * h;
        path.max_speed_drift = std::max(path.max_speed_drift, drift);
        path.min_beta = std::min(path.min_beta, beta(chart, Vec(z)));
        if (path.min_beta < opts.exit_beta) {
            path.exited = true;
            break;
        }
        if (opts.recenter_radius > 0.0 && z.norm() > opts.recenter_radius) {
            Vec zc(z), vc(v);
            ReductionResult red = move_point(chart, zc);
            Vec tangent = red.change.inverse() * phi_differential(chart, zc, vc);
            chart = red.standard;
            if (opts.clamp_to_generating_set) {
                SphereMaxOptions mo;
                mo.throw_on_failure = false;
                const int starts = n == 2 ? 8 : default_starts(n);
                double m = max_on_sphere(chart.p3(), 0, starts, mo).max_value;
                if (m > sphere_bound()) {
                    chart = StandardCubic((sphere_bound() / m) * chart.p3());
                    ++path.clamps;
                }
            }
            field = std::make_unique<GeodesicField>(chart.p3());
            z = SVec::Zero(n);
            v = tangent.tail(n);
            ++chart_id;
            ++path.recenterings;
            path.max_speed_drift =
                std::max(path.max_speed_drift, std::abs(field->speed(z, v) - speed0) / speed0);
        }
        if (step % every == 0 || t >= t_max)
            record(t, chart_id);
    }
    return path;
}

} // namespace psr
