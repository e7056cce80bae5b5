#include "psr/membership.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <thread>

#include "psr/domain.hpp"
#include "psr/random.hpp"

namespace psr {

namespace {

constexpr double kKktTarget = 1e-9;
constexpr int kAngularScan = 2048;

struct Candidate {
    double value = -INFINITY;
    Vec z;
    double kkt = INFINITY;
};

double kkt_residual(const SymCubic& p, const Vec& z)
{
    return (gradient(p, z) - 3.0 * eval(p, z) * z).norm();
}

Vec ascend(const SymCubic& p, Vec z)
{
    double f = eval(p, z);
    double step = 1.0;
    for (int it = 0; it < 2000; ++it) {
        Vec g = gradient(p, z);
        Vec gt = g - g.dot(z) * z;
        double gn2 = gt.squaredNorm();
        if (gn2 < 1e-22)
            break;
        bool moved = false;
        for (int ls = 0; ls < 60; ++ls) {
            Vec trial = (z + step * gt).normalized();
            double ft = eval(p, trial);
            if (ft >= f + 1e-4 * step * gn2) {
                z = trial;
                f = ft;
                moved = true;
                step *= 2.0;
                break;
            }
            step *= 0.5;
        }
        if (!moved)
            break;
    }
    return z;
}

// Newton on grad P(z) = lambda z, |z|^2 = 1.
Vec polish(const SymCubic& p, Vec z)
{
    const int n = p.n();
    double best = kkt_residual(p, z);
    double fz = eval(p, z);
    for (int it = 0; it < 30 && best > 1e-15; ++it) {
        double lambda = 3.0 * eval(p, z);
        Mat j = Mat::Zero(n + 1, n + 1);
        j.topLeftCorner(n, n) = 6.0 * contract(p, z) - lambda * Mat::Identity(n, n);
        j.block(0, n, n, 1) = -z;
        j.block(n, 0, 1, n) = z.transpose();
        Vec r(n + 1);
        r.head(n) = gradient(p, z) - lambda * z;
        r[n] = 0.5 * (z.squaredNorm() - 1.0);
        Vec d = j.fullPivLu().solve(-r);
        if (!d.allFinite())
            break;
        Vec next = (z + d.head(n)).normalized();
        double res = kkt_residual(p, next);
        double fn = eval(p, next);
        if (!(res < best) || fn < fz - 1e-12)
            break;
        z = next;
        best = res;
        fz = fn;
    }
    return z;
}

Candidate run_start(const SymCubic& p, const Vec& start)
{
    Candidate c;
    c.z = polish(p, ascend(p, start));
    c.value = eval(p, c.z);
    c.kkt = kkt_residual(p, c.z);
    return c;
}

bool better(const Candidate& a, const Candidate& b)
{
    // Converged points first, then by value; callers scan in index order so ties keep the lower index.
    bool ca = a.kkt <= kKktTarget, cb = b.kkt <= kKktTarget;
    if (ca != cb)
        return ca;
    return a.value > b.value;
}

} // namespace

int default_starts(int n) { return std::max(64, 16 * n * n); }

const char* position_name(Position p)
{
    switch (p) {
    case Position::Interior: return "Interior";
    case Position::Boundary: return "Boundary";
    case Position::Outside: return "Outside";
    }
    return "Outside";
}

SphereMaxResult max_on_sphere(const SymCubic& p3, std::uint64_t seed, int starts, const SphereMaxOptions& opts)
{
    if (starts < 1)
        fail(ErrorKind::InvalidArgument, "starts must be >= 1");
    const int n = p3.n();
    SphereMaxResult out;
    if (n == 1) {
        double c = p3.coeff(0, 0, 0);
        out.argmax = Vec::Constant(1, c < 0 ? -1.0 : 1.0);
        out.max_value = std::abs(c);
        out.kkt_residual = kkt_residual(p3, out.argmax);
        out.starts_used = 1;
        return out;
    }

    std::vector<Vec> inits;
    if (n == 2) {
        // Local maxima of a dense angular scan become the leading starts.
        std::vector<double> vals(kAngularScan);
        auto dir = [](int k) {
            double th = 2.0 * M_PI * k / kAngularScan;
            Vec v(2);
            v << std::cos(th), std::sin(th);
            return v;
        };
        const auto& c = p3.coefficients(); // y1^3, y1^2 y2, y1 y2^2, y2^3
        for (int k = 0; k < kAngularScan; ++k) {
            double th = 2.0 * M_PI * k / kAngularScan;
            double x = std::cos(th), y = std::sin(th);
            vals[k] = ((c[0] * x + c[1] * y) * x + c[2] * y * y) * x + c[3] * y * y * y;
        }
        for (int k = 0; k < kAngularScan; ++k) {
            double prev = vals[(k + kAngularScan - 1) % kAngularScan];
            double next = vals[(k + 1) % kAngularScan];
            if (vals[k] >= prev && vals[k] > next)
                inits.push_back(dir(k));
        }
    }
    Rng rng(seed);
    for (int s = 0; s < starts; ++s)
        inits.push_back(random_unit(rng, n));

    std::vector<Candidate> results(inits.size());
    const int workers = std::max(1, std::min<int>(opts.workers, static_cast<int>(inits.size())));
    if (workers == 1) {
        for (size_t i = 0; i < inits.size(); ++i)
            results[i] = run_start(p3, inits[i]);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                for (size_t i = w; i < inits.size(); i += workers)
                    results[i] = run_start(p3, inits[i]);
            });
        for (auto& t : pool)
            t.join();
    }
    size_t best = 0;
    for (size_t i = 1; i < results.size(); ++i)
        if (better(results[i], results[best]))
            best = i;
    out.max_value = results[best].value;
    out.argmax = results[best].z;
    out.kkt_residual = results[best].kkt;
    out.starts_used = static_cast<int>(inits.size());
    out.converged = out.kkt_residual <= kKktTarget;
    if (!out.converged && opts.throw_on_failure)
        fail(ErrorKind::ConvergenceFailure, "no start reached the KKT tolerance");
    return out;
}

std::vector<SphereMaxResult> sphere_ascent_endpoints(const SymCubic& p3, std::uint64_t seed, int starts)
{
    Rng rng(seed);
    std::vector<SphereMaxResult> out;
    for (int s = 0; s < starts; ++s) {
        Candidate c = run_start(p3, random_unit(rng, p3.n()));
        SphereMaxResult r;
        r.max_value = c.value;
        r.argmax = c.z;
        r.kkt_residual = c.kkt;
        r.starts_used = 1;
        r.converged = c.kkt <= kKktTarget;
        out.push_back(r);
    }
    return out;
}

MembershipReport classify(const SymCubic& p3, std::uint64_t seed, int starts, int workers)
{
    MembershipReport r;
    SphereMaxOptions opts;
    opts.workers = workers;
    r.sphere_max = max_on_sphere(p3, seed, starts > 0 ? starts : default_starts(p3.n()), opts);
    const double bound = sphere_bound();
    const double m = r.sphere_max.max_value;
    r.is_closed_ccpsr = m <= bound + kBoundaryTolerance;
    r.singular_at_infinity = std::abs(m - bound) <= kBoundaryTolerance;
    r.regular_boundary = m < bound - kBoundaryTolerance;
    if (r.regular_boundary)
        r.generating_set_position = Position::Interior;
    else if (r.singular_at_infinity)
        r.generating_set_position = Position::Boundary;
    else
        r.generating_set_position = Position::Outside;
    return r;
}

Mat hyperbolicity_form(const StandardCubic& s, const Vec& z)
{
    require_dim(z.size(), s.n(), "hyperbolicity_form");
    const int n = s.n();
    return 3.0 * Mat::Identity(n, n) - 9.0 * contract(s.p3(), z) + z * z.transpose();
}

EigenRangeReport eigen_range_check(const StandardCubic& s, int samples, std::uint64_t seed)
{
    if (!classify(s.p3(), seed).is_closed_ccpsr)
        fail(ErrorKind::NotCCPSR, "instance is not closed");
    const int n = s.n();
    Rng rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    EigenRangeReport r;
    r.min_eigenvalue = INFINITY;
    r.max_eigenvalue = -INFINITY;
    for (int k = 0; k < samples; ++k) {
        Vec d = random_unit(rng, n);
        double radius = positive_root(eval(s.p3(), d)) * std::pow(unif(rng), 1.0 / n);
        Eigen::SelfAdjointEigenSolver<Mat> es(contract(s.p3(), radius * d), Eigen::EigenvaluesOnly);
        r.min_eigenvalue = std::min(r.min_eigenvalue, es.eigenvalues().minCoeff());
        r.max_eigenvalue = std::max(r.max_eigenvalue, es.eigenvalues().maxCoeff());
    }
    r.samples = samples;
    r.within_bounds = r.min_eigenvalue > -5.0 / 6.0 - 1e-9 && r.max_eigenvalue < 2.0 / 3.0 + 1e-9;
    return r;
}

} // namespace psr
