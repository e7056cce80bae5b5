#include "psr/moduli.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "psr/curvature.hpp"
#include "psr/domain.hpp"
#include "psr/random.hpp"

namespace psr {

Position generating_set_position(const SymCubic& p3, std::uint64_t seed)
{
    return classify(p3, seed).generating_set_position;
}

DeformationCurve deform(const StandardCubic& a, const StandardCubic& b, int k_samples, std::uint64_t seed)
{
    require_dim(b.n(), a.n(), "deform endpoints");
    if (k_samples < 1)
        fail(ErrorKind::InvalidArgument, "need at least one sample");
    if (!classify(a.p3(), seed).is_closed_ccpsr || !classify(b.p3(), seed).is_closed_ccpsr)
        fail(ErrorKind::EndpointNotClosed, "deformation endpoints must be closed");
    DeformationCurve curve;
    curve.from = a;
    curve.to = b;
    for (int i = 0; i < k_samples; ++i) {
        double t = k_samples == 1 ? 0.0 : static_cast<double>(i) / (k_samples - 1);
        DeformationSample s;
        s.t = t;
        s.form = StandardCubic((1.0 - t) * a.p3() + t * b.p3());
        s.report = classify(s.form.p3(), seed);
        curve.all_closed = curve.all_closed && s.report.is_closed_ccpsr;
        curve.samples.push_back(std::move(s));
    }
    return curve;
}

StandardCubic scale_path(const SymCubic& p3, double s)
{
    if (!(s >= 0.0 && s <= 1.0))
        fail(ErrorKind::InvalidArgument, "scale must lie in [0, 1]");
    return StandardCubic(s * p3);
}

HomogeneityResult homogeneity_test(const SymCubic& p3)
{
    const int n = p3.n();
    StandardCubic s(p3);
    // Basis of so(n): E_ab = e_a e_b^T - e_b e_a^T, a < b.
    std::vector<Mat> basis;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            Mat e = Mat::Zero(n, n);
            e(a, b) = 1.0;
            e(b, a) = -1.0;
            basis.push_back(e);
        }
    const SoNDirectionField zero = SoNDirectionField::zero(n);
    auto coeffs = [](const SymCubic& c) {
        return Eigen::Map<const Vec>(c.coefficients().data(), static_cast<Eigen::Index>(c.coefficients().size()));
    };

    // delta P3 along e_m only involves B_m, so the system splits per direction.
    std::vector<Mat> gens(n, Mat::Zero(n, n));
    double res2 = 0.0;
    for (int m = 0; m < n; ++m) {
        Vec v = Vec::Unit(n, m);
        Vec rhs = coeffs(delta_p3(s, zero, v));
        if (basis.empty()) {
            res2 += rhs.squaredNorm();
            continue;
        }
        Mat a(rhs.size(), basis.size());
        for (size_t q = 0; q < basis.size(); ++q) {
            std::vector<Mat> g(n, Mat::Zero(n, n));
            g[m] = basis[q];
            a.col(static_cast<Eigen::Index>(q)) = coeffs(delta_p3(s, SoNDirectionField(g), v)) - rhs;
        }
        Vec x = a.completeOrthogonalDecomposition().solve(-rhs);
        for (size_t q = 0; q < basis.size(); ++q)
            gens[m] += x[static_cast<Eigen::Index>(q)] * basis[q];
        res2 += (a * x + rhs).squaredNorm();
    }
    HomogeneityResult r;
    r.db0 = SoNDirectionField(gens);
    r.residual = std::sqrt(res2);
    r.is_homogeneous = r.residual <= 1e-9 * (1.0 + p3.tensor_norm());
    return r;
}

namespace {

SymCubic pad(const SymCubic& p, int n)
{
    std::vector<std::pair<Triple, double>> terms;
    const auto& ts = triples(p.n());
    for (size_t t = 0; t < ts.size(); ++t)
        terms.push_back({ts[t], p.coefficients()[t]});
    return SymCubic::from_monomials(n, terms);
}

int sampling_starts(int n) { return n == 2 ? 8 : default_starts(n); }

double sphere_max_value(const SymCubic& p, std::uint64_t seed)
{
    SphereMaxOptions opts;
    opts.throw_on_failure = false;
    return max_on_sphere(p, seed, sampling_starts(p.n()), opts).max_value;
}

// Projected descent of sign * S over the coefficients, staying in the
// admissible set by rescaling onto the sphere-max bound.
SymCubic polish_extreme(const SymCubic& start, double sign, std::uint64_t seed)
{
    const int n = start.n();
    const double bound = sphere_bound();
    std::vector<double> x = start.coefficients();
    auto objective = [&](const std::vector<double>& c) {
        return sign * scalar_at_base(SymCubic::from_coefficients(n, c));
    };
    double f = objective(x);
    double eta = 1e-2;
    const double fd = 1e-6;
    for (int it = 0; it < 200 && eta > 1e-10; ++it) {
        std::vector<double> g(x.size());
        for (size_t q = 0; q < x.size(); ++q) {
            std::vector<double> xp = x, xm = x;
            xp[q] += fd;
            xm[q] -= fd;
            g[q] = (objective(xp) - objective(xm)) / (2.0 * fd);
        }
        std::vector<double> trial(x.size());
        for (size_t q = 0; q < x.size(); ++q)
            trial[q] = x[q] - eta * g[q];
        SymCubic tp = SymCubic::from_coefficients(n, trial);
        double m = sphere_max_value(tp, seed);
        if (m > bound) {
            double scale = bound / m;
            for (double& v : trial)
                v *= scale;
        }
        double ft = objective(trial);
        if (ft < f - 1e-15) {
            x = trial;
            f = ft;
            eta *= 1.5;
        } else {
            eta *= 0.5;
        }
    }
    return SymCubic::from_coefficients(n, x);
}

} // namespace

BoundsEstimate curvature_bounds_estimate(int n, int budget, std::uint64_t seed, int workers)
{
    if (n < 1)
        fail(ErrorKind::InvalidArgument, "n must be positive");
    if (budget < 1)
        fail(ErrorKind::InvalidArgument, "budget must be >= 1");
    const double bound = sphere_bound();

    std::vector<SymCubic> pool;
    if (n >= 2) {
        for (FixtureKind k : {FixtureKind::A, FixtureKind::B, FixtureKind::C, FixtureKind::D, FixtureKind::E})
            pool.push_back(pad(surface_fixture(k).standard.p3(), n));
        pool.push_back(pad(surface_fixture(FixtureKind::F, 0.0).standard.p3(), n));
    }
    const size_t fixed = pool.size();
    pool.resize(fixed + static_cast<size_t>(budget));
    auto make = [&](size_t i) {
        std::uint64_t s = seed + i;
        Rng rng(s);
        SymCubic p = random_cubic(rng, n);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        double u = unif(rng);
        double m = sphere_max_value(p, s);
        pool[fixed + i] = m > 0.0 ? (u * bound / m) * p : SymCubic(n);
    };
    const int w = std::max(1, workers);
    if (w == 1) {
        for (size_t i = 0; i < static_cast<size_t>(budget); ++i)
            make(i);
    } else {
        std::vector<std::thread> threads;
        for (int k = 0; k < w; ++k)
            threads.emplace_back([&, k] {
                for (size_t i = k; i < static_cast<size_t>(budget); i += w)
                    make(i);
            });
        for (auto& t : threads)
            t.join();
    }

    BoundsEstimate est;
    est.candidates = static_cast<int>(pool.size());
    double run_lo = INFINITY, run_hi = -INFINITY;
    est.l_hat = INFINITY;
    est.u_hat = -INFINITY;
    auto consider = [&](const SymCubic& p) {
        double s = scalar_at_base(p);
        if (s < est.l_hat) {
            est.l_hat = s;
            est.witness_lower = p;
        }
        if (s > est.u_hat) {
            est.u_hat = s;
            est.witness_upper = p;
        }
    };
    // Only candidates that set a new raw record get polished, in index order,
    // which keeps the estimates monotone in the budget.
    for (size_t i = 0; i < pool.size(); ++i) {
        double s = scalar_at_base(pool[i]);
        consider(pool[i]);
        if (n < 2)
            continue;
        if (s < run_lo) {
            run_lo = s;
            consider(polish_extreme(pool[i], 1.0, seed + i));
        }
        if (s > run_hi) {
            run_hi = s;
            consider(polish_extreme(pool[i], -1.0, seed + i));
        }
    }
    return est;
}

FixtureKind parse_fixture_kind(const std::string& s)
{
    if (s == "a")
        return FixtureKind::A;
    if (s == "b")
        return FixtureKind::B;
    if (s == "c")
        return FixtureKind::C;
    if (s == "d")
        return FixtureKind::D;
    if (s == "e")
        return FixtureKind::E;
    if (s == "f")
        return FixtureKind::F;
    fail(ErrorKind::InvalidArgument, "unknown fixture kind '" + s + "'");
}

std::string fixture_kind_name(FixtureKind k)
{
    return std::string(1, static_cast<char>('a' + static_cast<int>(k)));
}

namespace {

Mat rows3(std::initializer_list<double> v)
{
    Mat m(3, 3);
    auto it = v.begin();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            m(i, j) = *it++;
    return m;
}

SurfaceFixture checked(SurfaceFixture f)
{
    AmbientCubic reduced = apply_change(f.ambient, f.change);
    AmbientCubic want = f.standard.to_ambient();
    double worst = 0.0;
    for (size_t t = 0; t < reduced.tensor().coefficients().size(); ++t)
        worst = std::max(worst, std::abs(reduced.tensor().coefficients()[t] - want.tensor().coefficients()[t]));
    if (worst > 1e-12)
        fail(ErrorKind::NumericalFailure, "fixture change does not reproduce its standard form");
    return f;
}

} // namespace

SurfaceFixture surface_fixture(FixtureKind kind, std::optional<double> b_param)
{
    const double r2 = std::sqrt(2.0), r3 = std::sqrt(3.0), r6 = std::sqrt(6.0);
    const double r15 = std::sqrt(15.0), r30 = std::sqrt(30.0);
    SurfaceFixture f;
    f.kind = kind;
    if (kind != FixtureKind::F && b_param)
        fail(ErrorKind::InvalidArgument, "only kind f takes a parameter");
    switch (kind) {
    case FixtureKind::A: // xyz
        f.ambient = AmbientCubic(SymCubic::from_monomials(3, {{{0, 1, 2}, 1.0}}));
        f.change = LinearChange(rows3({1, -2 / r3, 0, 1, 1 / r3, -1, 1, 1 / r3, 1}));
        f.standard = StandardCubic(SymCubic::from_monomials(2, {{{0, 0, 0}, -2 / (3 * r3)}, {{0, 1, 1}, 2 / r3}}));
        break;
    case FixtureKind::B: // x(xy - z^2)
        f.ambient = AmbientCubic(SymCubic::from_monomials(3, {{{0, 0, 1}, 1.0}, {{0, 2, 2}, -1.0}}));
        f.change = LinearChange(rows3({1, -1 / r3, 0, 1, 2 / r3, 0, 0, 0, 1}));
        f.standard = StandardCubic(SymCubic::from_monomials(2, {{{0, 0, 0}, 2 / (3 * r3)}, {{0, 1, 1}, 1 / r3}}));
        break;
    case FixtureKind::C: // x(yz + x^2)
        f.ambient = AmbientCubic(SymCubic::from_monomials(3, {{{0, 1, 2}, 1.0}, {{0, 0, 0}, 1.0}}));
        f.change = LinearChange(rows3({-1, 0, 2 * r2 / r15, 1, 1 / r2, -1 / r30, -2, r2, r2 / r15}));
        f.standard = StandardCubic(
            SymCubic::from_monomials(2, {{{0, 0, 1}, 2 * r2 / r15}, {{1, 1, 1}, 14 * r2 / (15 * r15)}}));
        break;
    case FixtureKind::D: // z(x^2 + y^2 - z^2)
        f.ambient = AmbientCubic(
            SymCubic::from_monomials(3, {{{0, 0, 2}, 1.0}, {{1, 1, 2}, 1.0}, {{2, 2, 2}, -1.0}}));
        f.change = LinearChange(rows3({0, 0, 1, 0, 1, 0, -1, 0, 0}));
        f.standard = StandardCubic(SymCubic(2));
        break;
    case FixtureKind::E: // x(y^2 - z^2) + y^3
        f.ambient = AmbientCubic(
            SymCubic::from_monomials(3, {{{0, 1, 1}, 1.0}, {{0, 2, 2}, -1.0}, {{1, 1, 1}, 1.0}}));
        f.change = LinearChange(rows3({2, 1 / r3, 0, -1, 1 / r3, 0, 0, 0, 1 / r2}));
        f.standard =
            StandardCubic(SymCubic::from_monomials(2, {{{0, 0, 0}, 2 / (3 * r3)}, {{0, 1, 1}, -1 / (2 * r3)}}));
        break;
    case FixtureKind::F: { // y^2 z - 4x^3 + 3xz^2 + b z^3
        if (!b_param || !(*b_param > -1.0 && *b_param < 1.0))
            fail(ErrorKind::InvalidArgument, "kind f needs b in (-1, 1)");
        const double b = *b_param;
        const double q = std::cbrt(1.0 - b), s6 = std::pow(1.0 - b, 1.0 / 6.0);
        f.b_param = b;
        f.ambient = AmbientCubic(SymCubic::from_monomials(
            3, {{{1, 1, 2}, 1.0}, {{0, 0, 0}, -4.0}, {{0, 2, 2}, 3.0}, {{2, 2, 2}, b}}));
        f.change = LinearChange(rows3({1 / (2 * q), 0, -s6 / r6, 0, s6, 0, -1 / q, 0, 0}));
        f.standard = StandardCubic(SymCubic::from_monomials(2, {{{1, 1, 1}, r2 * std::sqrt(1.0 - b) / (3 * r3)}}));
        break;
    }
    }
    return checked(std::move(f));
}

SurfaceFixture limit_to_e_fixture()
{
    const double r3 = std::sqrt(3.0);
    const double c = std::cbrt(0.5);
    SurfaceFixture f;
    f.kind = FixtureKind::E;
    f.ambient = StandardCubic(SymCubic::from_monomials(2, {{{0, 0, 0}, 2 / (3 * r3)}})).to_ambient();
    f.change = LinearChange(c * rows3({4.0 / 3, 2 / (3 * r3), 0, 1 / r3, 5.0 / 3, 0, 0, 0, r3 / std::sqrt(2.0)}));
    f.standard = StandardCubic(SymCubic::from_monomials(2, {{{0, 0, 0}, 2 / (3 * r3)}, {{0, 1, 1}, -1 / (2 * r3)}}));
    return checked(std::move(f));
}

} // namespace psr
