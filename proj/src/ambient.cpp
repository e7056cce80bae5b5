#include "psr/ambient.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace psr {

double eval(const AmbientCubic& h, const Vec& p) { return eval(h.tensor(), p); }

Vec gradient(const AmbientCubic& h, const Vec& p) { return gradient(h.tensor(), p); }

Mat hessian(const AmbientCubic& h, const Vec& p) { return 6.0 * contract(h.tensor(), p); }

HyperbolicityInfo hyperbolicity(const AmbientCubic& h, const Vec& p)
{
    require_dim(p.size(), h.m(), "hyperbolicity point");
    HyperbolicityInfo info;
    info.h_value = eval(h, p);
    Eigen::SelfAdjointEigenSolver<Mat> es(-hessian(h, p), Eigen::EigenvaluesOnly);
    info.eigenvalues = es.eigenvalues();
    const double radius = info.eigenvalues.cwiseAbs().maxCoeff();
    const double tol = 1e-10 * radius;
    for (int i = 0; i < info.eigenvalues.size(); ++i) {
        double ev = info.eigenvalues[i];
        if (std::abs(ev) <= tol)
            info.degenerate = true;
        else if (ev < 0)
            ++info.negative;
        else
            ++info.positive;
    }
    info.hyperbolic = info.h_value > 0 && radius > 0 && !info.degenerate && info.negative == 1 &&
                      info.positive == h.m() - 1;
    return info;
}

bool is_hyperbolic_point(const AmbientCubic& h, const Vec& p) { return hyperbolicity(h, p).hyperbolic; }

AmbientCubic StandardCubic::to_ambient() const
{
    const int n = p3_.n();
    std::vector<std::pair<Triple, double>> terms;
    terms.push_back({{0, 0, 0}, 1.0});
    for (int i = 1; i <= n; ++i)
        terms.push_back({{0, i, i}, -1.0});
    const auto& ts = triples(n);
    const auto& c = p3_.coefficients();
    for (size_t t = 0; t < ts.size(); ++t)
        if (c[t] != 0.0)
            terms.push_back({{ts[t][0] + 1, ts[t][1] + 1, ts[t][2] + 1}, c[t]});
    return AmbientCubic(SymCubic::from_monomials(n + 1, terms));
}

double StandardCubic::x_block_defect(const AmbientCubic& h)
{
    const SymCubic& t = h.tensor();
    const int m = t.n();
    double worst = std::abs(t.coeff(0, 0, 0) - 1.0);
    for (int i = 1; i < m; ++i) {
        worst = std::max(worst, std::abs(t.coeff(0, 0, i)));
        for (int j = i; j < m; ++j)
            worst = std::max(worst, std::abs(t.coeff(0, i, j) - (i == j ? -1.0 : 0.0)));
    }
    return worst;
}

StandardCubic StandardCubic::from_ambient(const AmbientCubic& h, double tol)
{
    if (h.m() < 2)
        fail(ErrorKind::InvalidArgument, "standard form needs m >= 2");
    if (x_block_defect(h) > tol)
        fail(ErrorKind::InvalidArgument, "cubic is not in standard form");
    const SymCubic& t = h.tensor();
    const int n = h.m() - 1;
    std::vector<double> c;
    for (const auto& tr : triples(n))
        c.push_back(t.coeff(tr[0] + 1, tr[1] + 1, tr[2] + 1));
    return StandardCubic(SymCubic::from_coefficients(n, c));
}

LinearChange::LinearChange(Mat matrix) : matrix_(std::move(matrix))
{
    if (matrix_.rows() != matrix_.cols())
        fail(ErrorKind::DimensionMismatch, "linear change must be square");
    Eigen::FullPivLU<Mat> lu(matrix_);
    if (std::abs(lu.determinant()) <= 1e-12)
        fail(ErrorKind::InvalidArgument, "linear change is singular");
    inverse_ = lu.inverse();
}

LinearChange LinearChange::identity(int m) { return LinearChange(Mat::Identity(m, m)); }

AmbientCubic apply_change(const AmbientCubic& h, const LinearChange& a)
{
    require_dim(a.m(), h.m(), "apply_change");
    return AmbientCubic(pullback(h.tensor(), a.matrix()));
}

} // namespace psr
