// Acceptance run: one PASS/FAIL line per criterion, with the measured values
// and wall time. Exit status is nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "psr/curvature.hpp"
#include "psr/domain.hpp"
#include "psr/membership.hpp"
#include "psr/moduli.hpp"
#include "psr/random.hpp"
#include "psr/standard_form.hpp"
#include "test_util.hpp"

using namespace psr;
using psr::testing::bound;
using psr::testing::grid_closed;
using psr::testing::random_member;
using psr::testing::uniform;

namespace {

const double r2 = std::sqrt(2.0), r3 = std::sqrt(3.0), r15 = std::sqrt(15.0);

struct Outcome {
    bool ok = true;
    std::ostringstream detail;

    void require(bool cond, const std::string& what)
    {
        if (!cond) {
            if (ok)
                detail << "first failure: " << what << "; ";
            ok = false;
        }
    }
};

double max_coeff_diff(const SymCubic& a, const SymCubic& b)
{
    if (a.n() != b.n())
        return INFINITY;
    double d = 0;
    for (size_t t = 0; t < a.coefficients().size(); ++t)
        d = std::max(d, std::abs(a.coefficients()[t] - b.coefficients()[t]));
    return d;
}

SymCubic mono(int n, const std::vector<std::pair<Triple, double>>& terms) { return SymCubic::from_monomials(n, terms); }

SymCubic b_form() { return mono(2, {{{0, 0, 0}, 2 / (3 * r3)}, {{0, 1, 1}, 1 / r3}}); }
SymCubic a_flipped() { return mono(2, {{{0, 0, 0}, 2 / (3 * r3)}, {{0, 1, 1}, -2 / r3}}); }

Vec unit_speed(const StandardCubic& s, Vec v)
{
    return v / std::sqrt(v.dot(pullback_metric(s, Vec::Zero(s.n())) * v));
}

Vec interior_point(Rng& rng, const StandardCubic& s, double max_frac)
{
    Vec u = random_unit(rng, s.n());
    return uniform(rng, 0, max_frac) * ray_roots(s.p3(), u).t_pos * u;
}

// Golden reduced polynomials, written out by hand.
void golden_forms(Outcome& o)
{
    struct Case {
        std::string name;
        SurfaceFixture fix;
        SymCubic want;
    };
    std::vector<Case> cases = {
        {"a", surface_fixture(FixtureKind::A), mono(2, {{{0, 0, 0}, -2 / (3 * r3)}, {{0, 1, 1}, 2 / r3}})},
        {"b", surface_fixture(FixtureKind::B), b_form()},
        {"c", surface_fixture(FixtureKind::C),
         mono(2, {{{0, 0, 1}, 2 * r2 / r15}, {{1, 1, 1}, 14 * r2 / (15 * r15)}})},
        {"d", surface_fixture(FixtureKind::D), SymCubic(2)},
        {"e", surface_fixture(FixtureKind::E), mono(2, {{{0, 0, 0}, 2 / (3 * r3)}, {{0, 1, 1}, -1 / (2 * r3)}})},
    };
    for (double b : {-0.9, 0.0, 0.9})
        cases.push_back({"f(" + std::to_string(b) + ")", surface_fixture(FixtureKind::F, b),
                         mono(2, {{{1, 1, 1}, r2 * std::sqrt(1 - b) / (3 * r3)}})});
    double worst = 0;
    for (const Case& c : cases) {
        AmbientCubic moved = apply_change(c.fix.ambient, c.fix.change);
        double xd = StandardCubic::x_block_defect(moved);
        double pd = max_coeff_diff(StandardCubic::from_ambient(moved, 1e-9).p3(), c.want);
        worst = std::max({worst, xd, pd});
        o.require(xd <= 1e-12 && pd <= 1e-12, "fixture " + c.name);
    }
    o.detail << "max coefficient error " << worst;
}

void threshold(Outcome& o)
{
    for (int n : {1, 2, 3, 5}) {
        auto pos = [&](double s) { return classify(mono(n, {{{0, 0, 0}, s * bound()}}), 0).generating_set_position; };
        o.require(pos(1.0) == Position::Boundary, "n = " + std::to_string(n) + " at the bound");
        o.require(pos(0.99) == Position::Interior, "n = " + std::to_string(n) + " at 0.99");
        o.require(pos(1.01) == Position::Outside, "n = " + std::to_string(n) + " at 1.01");
    }
    Rng rng(2002);
    int agree = 0, closed = 0;
    for (int i = 0; i < 25; ++i) {
        double u = 0.9 + 0.2 * (i + 0.25) / 25;
        SymCubic p = random_member(rng, 2, u);
        bool c = classify(p, i).is_closed_ccpsr;
        closed += c;
        agree += c == grid_closed(p);
    }
    o.require(agree == 25, "grid oracle disagreement");
    o.detail << "grid oracle agrees on " << agree << "/25 (" << closed << " closed)";
}

void radius_bounds(Outcome& o)
{
    Rng rng(2003);
    double lo = INFINITY, hi = 0;
    for (int inst = 0; inst < 50; ++inst) {
        SymCubic p = random_member(rng, 2 + inst % 2, uniform(rng, 0, 1));
        for (int k = 0; k < 1000; ++k) {
            RayRoots r = ray_roots(p, random_unit(rng, p.n()));
            lo = std::min({lo, r.t_pos, -r.t_neg});
            hi = std::max({hi, r.t_pos, -r.t_neg});
        }
    }
    o.require(lo >= r3 / 2 - 1e-9 && hi <= r3 + 1e-9, "radius outside [sqrt3/2, sqrt3]");
    Vec e1 = Vec::Zero(1);
    e1[0] = 1;
    RayRoots t = ray_roots(mono(1, {{{0, 0, 0}, bound()}}), e1);
    double err = std::max(std::abs(t.t_pos - r3), std::abs(t.t_neg + r3 / 2));
    o.require(err <= 1e-10, "tangent roots");
    o.detail << "radii in [" << lo << ", " << hi << "], tangent root error " << err;
}

void curvature_values(Outcome& o)
{
    StandardCubic a = surface_fixture(FixtureKind::A).standard, b = surface_fixture(FixtureKind::B).standard;
    double sa = scalar_at_base(a.p3()), sb = scalar_at_base(b.p3());
    double fa = fd_scalar_oracle(a, Vec::Zero(2)), fb = fd_scalar_oracle(b, Vec::Zero(2));
    o.require(std::abs(sa) <= 1e-10, "a-form analytic");
    o.require(std::abs(sb + 9.0 / 4.0) <= 1e-10, "b-form analytic");
    o.require(std::abs(fa) <= 1e-4 && std::abs(fb + 9.0 / 4.0) <= 1e-4, "FD oracle");
    o.detail << "S(a) = " << sa << ", S(b) = " << sb << ", FD " << fa << ", " << fb;
}

void oracle_equivalence(Outcome& o)
{
    Rng rng(2005);
    double worst = 0;
    for (int inst = 0; inst < 50; ++inst) {
        StandardCubic s(random_member(rng, 2 + inst % 2, uniform(rng, 0, 1)));
        worst = std::max(worst, std::abs(scalar_at_base(s.p3()) - fd_scalar_oracle(s, Vec::Zero(s.n()))));
        for (int k = 0; k < 5; ++k) {
            Vec z = interior_point(rng, s, 0.8);
            worst = std::max(worst, std::abs(scalar_at(s, z) - fd_scalar_oracle(s, z)));
        }
    }
    o.require(worst <= 1e-4, "analytic vs FD");
    o.detail << "max |analytic - FD| " << worst;
}

void ds_consistency(Outcome& o)
{
    Rng rng(2006);
    double worst = 0;
    for (int inst = 0; inst < 20; ++inst) {
        int n = 2 + inst % 2;
        StandardCubic s(random_member(rng, n, uniform(rng, 0, 1)));
        Vec fd = psr::testing::fd_gradient([&](const Vec& z) { return scalar_at(s, z); }, Vec::Zero(n), 1e-4);
        worst = std::max(worst, (fd - ds_at_base(s.p3())).cwiseAbs().maxCoeff());
    }
    double homog = std::max({ds_at_base(surface_fixture(FixtureKind::A).standard.p3()).norm(),
                             ds_at_base(surface_fixture(FixtureKind::B).standard.p3()).norm(),
                             ds_at_base(a_flipped()).norm()});
    o.require(worst <= 1e-5, "dS vs FD");
    o.require(homog <= 1e-10, "dS on homogeneous fixtures");
    o.detail << "max |dS - FD| " << worst << ", homogeneous |dS| " << homog;
}

void eigen_bounds(Outcome& o)
{
    Rng rng(2007);
    double lo = INFINITY, hi = -INFINITY;
    for (int inst = 0; inst < 50; ++inst) {
        StandardCubic s(random_member(rng, 2 + inst % 2, uniform(rng, 0, 1)));
        EigenRangeReport r = eigen_range_check(s, 10000, inst);
        lo = std::min(lo, r.min_eigenvalue);
        hi = std::max(hi, r.max_eigenvalue);
    }
    o.require(lo > -5.0 / 6.0 - 1e-9 && hi < 2.0 / 3.0 + 1e-9, "eigenvalue range");
    SymCubic sharp = mono(3, {{{2, 2, 2}, bound()}});
    Vec z = Vec::Zero(3);
    z[2] = r3 * (1 - 1e-9);
    double top = Eigen::SelfAdjointEigenSolver<Mat>(contract(sharp, z)).eigenvalues().maxCoeff();
    o.require(std::abs(top - 2.0 / 3.0) <= 1e-6, "sharp fixture");
    o.detail << "eigenvalues in [" << lo << ", " << hi << "], sharp top " << top;
}

void homogeneity(Outcome& o)
{
    HomogeneityResult a = homogeneity_test(surface_fixture(FixtureKind::A).standard.p3());
    HomogeneityResult b = homogeneity_test(b_form());
    o.require(a.is_homogeneous && a.residual < 1e-9, "a-form");
    o.require(b.is_homogeneous && b.residual < 1e-9, "b-form");
    o.require(!homogeneity_test(SymCubic(2)).is_homogeneous, "P3 = 0");
    o.require(!homogeneity_test(surface_fixture(FixtureKind::D).standard.p3()).is_homogeneous, "d fixture");
    std::vector<SymCubic> pool = {a_flipped(), b_form()};
    for (FixtureKind k : {FixtureKind::A, FixtureKind::B, FixtureKind::C, FixtureKind::D, FixtureKind::E})
        pool.push_back(surface_fixture(k).standard.p3());
    for (double bp : {-0.9, 0.0, 0.9})
        pool.push_back(surface_fixture(FixtureKind::F, bp).standard.p3());
    int homog = 0;
    for (const SymCubic& p : pool)
        if (homogeneity_test(p).is_homogeneous) {
            ++homog;
            o.require(classify(p, 0).singular_at_infinity, "homogeneous instance not singular");
        }
    o.detail << "residuals a " << a.residual << ", b " << b.residual << "; " << homog << " homogeneous in pool of "
             << pool.size();
}

void deformation(Outcome& o)
{
    DeformationCurve c = deform(StandardCubic(b_form()), StandardCubic(a_flipped()), 101, 0);
    SymCubic e = mono(2, {{{0, 0, 0}, 2 / (3 * r3)}, {{0, 1, 1}, -1 / (2 * r3)}});
    double d = max_coeff_diff(c.samples[50].form.p3(), e);
    int closed = 0;
    for (const DeformationSample& s : c.samples)
        closed += s.report.is_closed_ccpsr;
    o.require(c.samples.size() == 101 && std::abs(c.samples[50].t - 0.5) < 1e-15, "sampling");
    o.require(d <= 1e-12, "e-form at t = 1/2");
    o.require(closed == 101 && c.all_closed, "closed samples");
    o.detail << "e-form error " << d << ", closed " << closed << "/101";
}

void completeness(Outcome& o)
{
    std::vector<std::pair<std::string, StandardCubic>> fixtures = {
        {"a", surface_fixture(FixtureKind::A).standard}, {"b", surface_fixture(FixtureKind::B).standard},
        {"d", surface_fixture(FixtureKind::D).standard}, {"e", surface_fixture(FixtureKind::E).standard},
        {"f(0)", surface_fixture(FixtureKind::F, 0.0).standard}};
    Rng rng(2010);
    double drift = 0, min_beta = INFINITY;
    int exited = 0, runs = 0;
    for (const auto& [name, s] : fixtures)
        for (int k = 0; k < 20; ++k) {
            GeodesicPath p = geodesic(s, Vec::Zero(2), unit_speed(s, random_unit(rng, 2)), 1000.0, 5e-3);
            ++runs;
            exited += p.exited;
            drift = std::max(drift, p.max_speed_drift);
            min_beta = std::min(min_beta, p.min_beta);
            o.require(!p.exited && p.max_speed_drift < 1e-6, "geodesic on " + name);
        }
    o.detail << runs << " geodesics, exited " << exited << ", max drift " << drift << ", min beta " << min_beta;
}

void bounds_containment(Outcome& o)
{
    BoundsEstimate b = curvature_bounds_estimate(2, 10000, 0, 1);
    // 1e-12 absorbs the last-digit rounding of the closed forms -9/4 and 0.
    o.require(b.l_hat <= -9.0 / 4.0 + 1e-12, "l_hat");
    o.require(b.u_hat >= -1e-12, "u_hat");
    Rng rng(2011);
    double lo = INFINITY, hi = -INFINITY;
    for (int k = 0; k < 1000; ++k) {
        StandardCubic s(random_member(rng, 2, uniform(rng, 0, 1)));
        double v = k % 2 ? scalar_at(s, interior_point(rng, s, 0.9)) : scalar_at_base(s.p3());
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    o.require(lo >= b.l_hat - 1e-6 && hi <= b.u_hat + 1e-6, "samples outside band");
    o.detail << "l_hat " << b.l_hat << ", u_hat " << b.u_hat << ", samples in [" << lo << ", " << hi << "]";
}

void moduli_curve(Outcome& o)
{
    StandardCubic b(b_form()), a(a_flipped());
    // The four-sample curve puts its second sample at t = 1/3.
    StandardCubic cube = deform(b, a, 4, 0).samples[1].form;
    DeformationCurve c = deform(b, a, 101, 0);
    double worst = 0;
    int matched = 0;
    for (const DeformationSample& s : c.samples) {
        if (s.t <= 0 || s.t >= 1)
            continue;
        double r = -1.5 * s.form.p3().coeff(0, 1, 1);
        Vec z(2);
        z << r, 0;
        SymCubic moved = move_point(cube, z).standard.p3();
        SymCubic family = mono(2, {{{0, 0, 0}, 2 / (3 * r3)}, {{0, 1, 1}, -2 * r / 3}});
        double d = std::max(max_coeff_diff(moved, s.form.p3()), max_coeff_diff(moved, family));
        worst = std::max(worst, d);
        matched += d <= 1e-9;
    }
    o.require(max_coeff_diff(cube.p3(), mono(2, {{{0, 0, 0}, 2 / (3 * r3)}})) <= 1e-15, "t = 1/3 sample");
    o.require(matched == 99, "interior samples");
    o.detail << matched << "/99 interior samples reproduced, max error " << worst;
}

} // namespace

int main()
{
    struct Criterion {
        int id;
        std::string name;
        double limit_s;
        std::function<void(Outcome&)> run;
    };
    std::vector<Criterion> all = {
        {1, "golden standard forms", 1, golden_forms},
        {2, "membership threshold", 30, threshold},
        {3, "root and radius bounds", 30, radius_bounds},
        {4, "curvature values", 10, curvature_values},
        {5, "oracle equivalence", 120, oracle_equivalence},
        {6, "dS consistency", 60, ds_consistency},
        {7, "eigenvalue bounds", 60, eigen_bounds},
        {8, "homogeneity", 10, homogeneity},
        {9, "deformation", 30, deformation},
        {10, "completeness probe", 300, completeness},
        {11, "bounds containment", 300, bounds_containment},
        {12, "moduli curve", 30, moduli_curve},
    };
    int failed = 0;
    for (const Criterion& c : all) {
        Outcome o;
        auto t0 = std::chrono::steady_clock::now();
        try {
            c.run(o);
        } catch (const std::exception& e) {
            o.ok = false;
            o.detail << "exception: " << e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs > c.limit_s) {
            o.ok = false;
            o.detail << "; over the " << c.limit_s << " s budget";
        }
        failed += !o.ok;
        std::printf("%s %2d %-24s %8.2fs  %s\n", o.ok ? "PASS" : "FAIL", c.id, c.name.c_str(), secs,
                    o.detail.str().c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(all.size()) - failed, all.size());
    return failed ? 1 : 0;
}
