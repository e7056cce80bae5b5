#include <gtest/gtest.h>

#include "psr/domain.hpp"
#include "psr/membership.hpp"
#include "psr/moduli.hpp"
#include "test_util.hpp"

using namespace psr;
using psr::testing::bound;
using psr::testing::random_member;
using psr::testing::scan_sphere_max;
using psr::testing::grid_closed;
using psr::testing::uniform;

namespace {

SymCubic cube(int n, double c) { return SymCubic::from_monomials(n, {{{0, 0, 0}, c}}); }

} // namespace

TEST(Membership, SphereMaxExamples)
{
    SphereMaxResult z = max_on_sphere(SymCubic(3), 1, 16);
    EXPECT_EQ(z.max_value, 0.0);
    EXPECT_LE(z.kkt_residual, 1e-9);

    SphereMaxResult c = max_on_sphere(cube(1, bound()), 1, 1);
    EXPECT_NEAR(c.max_value, bound(), 1e-15);
    EXPECT_NEAR(c.argmax[0], 1.0, 0);
    EXPECT_NEAR(max_on_sphere(cube(1, -0.3), 1, 1).max_value, 0.3, 1e-15);

    for (double t : {0.0, 0.25, 0.5, 1.0}) {
        SymCubic p = SymCubic::from_monomials(2, {{{0, 0, 0}, bound()}, {{1, 1, 1}, t * bound()}});
        EXPECT_NEAR(max_on_sphere(p, 2, 64).max_value, bound(), 1e-12) << t;
    }
    const double r3 = std::sqrt(3.0);
    SymCubic b = SymCubic::from_monomials(2, {{{0, 0, 0}, 2 / (3 * r3)}, {{0, 1, 1}, 1 / r3}});
    EXPECT_NEAR(max_on_sphere(b, 3, 64).max_value, bound(), 1e-12);
}

TEST(Membership, SphereMaxMatchesScanOracle)
{
    Rng rng(51);
    for (int trial = 0; trial < 40; ++trial) {
        int n = 2 + trial % 2;
        SymCubic p = random_cubic(rng, n);
        SphereMaxResult r = max_on_sphere(p, trial, default_starts(n));
        EXPECT_NEAR(r.max_value, scan_sphere_max(p), 1e-9 * (1 + std::abs(r.max_value)));
        EXPECT_LE(r.kkt_residual, 1e-9);
        EXPECT_NEAR(r.argmax.norm(), 1.0, 1e-12);
        EXPECT_NEAR(eval(p, r.argmax), r.max_value, 1e-12);
        Vec g = gradient(p, r.argmax) - 3 * r.max_value * r.argmax;
        EXPECT_LE(g.norm(), 1e-9);
    }
}

TEST(Membership, SphereMaxDominatesProbes)
{
    Rng rng(52);
    for (int trial = 0; trial < 20; ++trial) {
        int n = 2 + trial % 4;
        SymCubic p = random_cubic(rng, n);
        SphereMaxResult r = max_on_sphere(p, 7, default_starts(n));
        for (const SphereMaxResult& e : sphere_ascent_endpoints(p, 7, default_starts(n)))
            EXPECT_GE(r.max_value, e.max_value - 1e-12);
        for (int k = 0; k < 200; ++k)
            EXPECT_GE(r.max_value, eval(p, random_unit(rng, n)) - 1e-12);
    }
}

TEST(Membership, DeterministicAcrossWorkers)
{
    Rng rng(53);
    SymCubic p = random_cubic(rng, 4);
    SphereMaxOptions one, four;
    four.workers = 4;
    SphereMaxResult a = max_on_sphere(p, 9, 100, one);
    SphereMaxResult b = max_on_sphere(p, 9, 100, four);
    EXPECT_EQ(a.max_value, b.max_value);
    EXPECT_EQ(a.argmax, b.argmax);
    SphereMaxResult c = max_on_sphere(p, 9, 100, one);
    EXPECT_EQ(a.max_value, c.max_value);
}

TEST(Membership, RotationInvariance)
{
    Rng rng(54);
    for (int trial = 0; trial < 20; ++trial) {
        int n = 2 + trial % 3;
        SymCubic p = random_cubic(rng, n);
        Mat g = Mat::NullaryExpr(n, n, [&] { return std::normal_distribution<double>()(rng); });
        Mat q = Eigen::HouseholderQR<Mat>(g).householderQ();
        SphereMaxResult a = max_on_sphere(p, 1, default_starts(n));
        SphereMaxResult b = max_on_sphere(pullback(p, q), 1, default_starts(n));
        EXPECT_NEAR(a.max_value, b.max_value, 1e-9);
        EXPECT_NEAR(eval(p, q * b.argmax), a.max_value, 1e-9);
    }
}

TEST(Membership, Parity)
{
    Rng rng(55);
    for (int trial = 0; trial < 20; ++trial) {
        int n = 2 + trial % 3;
        SymCubic p = random_cubic(rng, n);
        EXPECT_NEAR(max_on_sphere(p, 1, default_starts(n)).max_value,
                    max_on_sphere(-p, 1, default_starts(n)).max_value, 1e-9);
    }
}

TEST(Membership, ClassifyExamples)
{
    MembershipReport z = classify(SymCubic(2), 0);
    EXPECT_TRUE(z.is_closed_ccpsr);
    EXPECT_FALSE(z.singular_at_infinity);
    EXPECT_TRUE(z.regular_boundary);
    EXPECT_EQ(z.generating_set_position, Position::Interior);
    for (int n : {1, 2, 3, 5}) {
        MembershipReport c = classify(cube(n, bound()), 0);
        EXPECT_TRUE(c.is_closed_ccpsr);
        EXPECT_TRUE(c.singular_at_infinity);
        EXPECT_FALSE(c.regular_boundary);
        EXPECT_EQ(c.generating_set_position, Position::Boundary);
    }
    MembershipReport o = classify(cube(2, 0.5), 0);
    EXPECT_FALSE(o.is_closed_ccpsr);
    EXPECT_EQ(o.generating_set_position, Position::Outside);
}

TEST(Membership, ReportInvariants)
{
    Rng rng(56);
    for (int trial = 0; trial < 40; ++trial) {
        int n = 1 + trial % 3;
        SymCubic p = random_member(rng, n, uniform(rng, 0.8, 1.2));
        MembershipReport r = classify(p, trial);
        double m = r.sphere_max.max_value;
        EXPECT_EQ(r.is_closed_ccpsr, m <= bound() + kBoundaryTolerance);
        EXPECT_EQ(r.singular_at_infinity, std::abs(m - bound()) <= kBoundaryTolerance);
        EXPECT_EQ(r.regular_boundary, m < bound() - kBoundaryTolerance);
        EXPECT_EQ(r.regular_boundary, r.is_closed_ccpsr && !r.singular_at_infinity);
        Position want = r.regular_boundary      ? Position::Interior
                        : r.singular_at_infinity ? Position::Boundary
                                                 : Position::Outside;
        EXPECT_EQ(r.generating_set_position, want);
    }
}

TEST(Membership, ThresholdAcrossDimensions)
{
    for (int n : {1, 2, 3, 5}) {
        EXPECT_EQ(classify(cube(n, bound()), 4).generating_set_position, Position::Boundary);
        EXPECT_EQ(classify(cube(n, 0.99 * bound()), 4).generating_set_position, Position::Interior);
        EXPECT_EQ(classify(cube(n, 1.01 * bound()), 4).generating_set_position, Position::Outside);
    }
}

TEST(Membership, ScalingPathStaysClosed)
{
    Rng rng(57);
    for (int trial = 0; trial < 10; ++trial) {
        SymCubic p = random_member(rng, 2, uniform(rng, 0.3, 1.0));
        ASSERT_TRUE(classify(p, 0).is_closed_ccpsr);
        for (double s = 0; s <= 1.0; s += 0.1)
            EXPECT_TRUE(classify(scale_path(p, s).p3(), 0).is_closed_ccpsr);
    }
}

TEST(Membership, AgreesWithGridOracle)
{
    Rng rng(58);
    for (int i = 0; i < 25; ++i) {
        double u = 0.9 + 0.2 * (i + 0.25) / 25;
        SymCubic p = random_member(rng, 2, u);
        EXPECT_EQ(classify(p, i).is_closed_ccpsr, grid_closed(p)) << "u = " << u;
    }
}

TEST(Membership, HyperbolicityFormExamples)
{
    Rng rng(59);
    StandardCubic s(random_cubic(rng, 3));
    EXPECT_TRUE(hyperbolicity_form(s, Vec::Zero(3)).isApprox(3 * Mat::Identity(3, 3)));
    // n = 1, P = c y^3: 3 - 9 c z + z^2, zero at the tangent point z = sqrt 3.
    StandardCubic t(cube(1, bound()));
    Vec z(1);
    z << std::sqrt(3.0);
    EXPECT_NEAR(hyperbolicity_form(t, z)(0, 0), 3 - 9 * bound() * std::sqrt(3.0) + 3, 1e-14);
    EXPECT_NEAR(hyperbolicity_form(t, z)(0, 0), 0.0, 1e-14);
    for (int inst = 0; inst < 10; ++inst) {
        StandardCubic m(random_member(rng, 2 + inst % 2, uniform(rng, 0, 1)));
        for (int k = 0; k < 100; ++k) {
            Vec u = random_unit(rng, m.n());
            Vec x = uniform(rng, 0, 0.999) * ray_roots(m.p3(), u).t_pos * u;
            EXPECT_GT(Eigen::SelfAdjointEigenSolver<Mat>(hyperbolicity_form(m, x)).eigenvalues().minCoeff(), 0);
        }
    }
}

TEST(Membership, EigenRange)
{
    EigenRangeReport zero = eigen_range_check(StandardCubic(SymCubic(2)), 100, 1);
    EXPECT_EQ(zero.min_eigenvalue, 0.0);
    EXPECT_EQ(zero.max_eigenvalue, 0.0);
    Rng rng(60);
    for (int inst = 0; inst < 10; ++inst) {
        StandardCubic m(random_member(rng, 2 + inst % 2, uniform(rng, 0, 1)));
        EigenRangeReport r = eigen_range_check(m, 2000, inst);
        EXPECT_TRUE(r.within_bounds);
        EXPECT_GT(r.min_eigenvalue, -5.0 / 6.0 - 1e-9);
        EXPECT_LT(r.max_eigenvalue, 2.0 / 3.0 + 1e-9);
    }
    // Sharp fixture: top eigenvalue tends to 2/3 at the boundary.
    StandardCubic sharp(SymCubic::from_monomials(3, {{{2, 2, 2}, bound()}}));
    Vec z = Vec::Zero(3);
    z[2] = std::sqrt(3.0) * (1 - 1e-9);
    Vec ev = Eigen::SelfAdjointEigenSolver<Mat>(contract(sharp.p3(), z)).eigenvalues();
    EXPECT_NEAR(ev[2], 2.0 / 3.0, 1e-6);
    EXPECT_NEAR(ev[0], 0.0, 1e-12);
    EXPECT_NEAR(ev[1], 0.0, 1e-12);
    EXPECT_THROW(eigen_range_check(StandardCubic(cube(2, 0.5)), 10, 1), Error);
}

TEST(Membership, HomogeneousFixturesAreSingular)
{
    for (FixtureKind k : {FixtureKind::A, FixtureKind::B, FixtureKind::C, FixtureKind::D, FixtureKind::E}) {
        SymCubic p = surface_fixture(k).standard.p3();
        if (homogeneity_test(p).is_homogeneous)
            EXPECT_TRUE(classify(p, 0).singular_at_infinity) << fixture_kind_name(k);
    }
}
