#include "psr/standard_form.hpp"

#include <cmath>

#include "psr/domain.hpp"

namespace psr {

namespace {

// Orthogonal matrix whose first column is the unit vector u and which is the
// identity for u = e1.
Mat frame_from(const Vec& u)
{
    const int m = static_cast<int>(u.size());
    Mat id = Mat::Identity(m, m);
    Vec e1 = Vec::Unit(m, 0);
    if (u[0] >= 0) {
        Vec w = u + e1;
        Mat h = id - 2.0 * w * w.transpose() / w.squaredNorm();
        Mat flip = -id;
        flip(0, 0) = 1.0;
        return -h * flip;
    }
    Vec w = u - e1;
    return id - 2.0 * w * w.transpose() / w.squaredNorm();
}

// Upper-triangular E with E^T G E = I.
Mat inverse_cholesky(const Mat& g)
{
    Eigen::LLT<Mat> llt(g);
    if (llt.info() != Eigen::Success)
        fail(ErrorKind::NumericalFailure, "Gram matrix is not positive definite");
    Mat l = llt.matrixL();
    if (l.diagonal().array().square().minCoeff() < 1e-12)
        fail(ErrorKind::NumericalFailure, "Cholesky pivot below 1e-12");
    const int k = static_cast<int>(g.rows());
    return l.transpose().triangularView<Eigen::Upper>().solve(Mat::Identity(k, k));
}

// Columns 2..m of the shear at p: tangent vectors -(dh_y / dh_x) e_x + e_y.
Mat shear_columns(const Vec& grad)
{
    const int m = static_cast<int>(grad.size());
    Mat c = Mat::Zero(m, m - 1);
    for (int i = 0; i < m - 1; ++i) {
        c(0, i) = -grad[i + 1] / grad[0];
        c(i + 1, i) = 1.0;
    }
    return c;
}

ReductionResult finish(const AmbientCubic& h, const Mat& a, const Vec& p, bool rescaled)
{
    ReductionResult r;
    r.change = LinearChange(a);
    r.base_point = p;
    r.rescaled = rescaled;
    AmbientCubic reduced = apply_change(h, r.change);
    r.x_block_defect = StandardCubic::x_block_defect(reduced);
    if (!(r.x_block_defect <= 1e-6))
        fail(ErrorKind::NumericalFailure, "reduction lost accuracy");
    const int n = h.m() - 1;
    Mat ext = Mat::Zero(n + 1, n);
    ext.bottomRows(n) = Mat::Identity(n, n);
    r.standard = StandardCubic(pullback(reduced.tensor(), ext));
    return r;
}

} // namespace

ReductionResult standard_form_at(const AmbientCubic& h, const Vec& p_in, bool rescale)
{
    require_dim(p_in.size(), h.m(), "standard_form_at point");
    if (h.m() < 2)
        fail(ErrorKind::InvalidArgument, "need at least two ambient variables");
    if (!is_hyperbolic_point(h, p_in))
        fail(ErrorKind::NotHyperbolic, "base point is not hyperbolic");
    Vec p = p_in;
    bool rescaled = false;
    double level = eval(h, p);
    if (std::abs(level - 1.0) > 1e-9) {
        if (!rescale)
            fail(ErrorKind::LevelMismatch, "h(p) differs from 1");
        p *= std::cbrt(1.0 / level);
        rescaled = true;
    }
    const int m = h.m();

    // <<u, v>> = |p|^2 <u, v> - <p, u><p, v> + dh(u) dh(v)
    Vec dh = gradient(h, p);
    Mat gram = p.squaredNorm() * Mat::Identity(m, m) - p * p.transpose() + dh * dh.transpose();
    Mat b = inverse_cholesky(gram);
    Vec q = b.triangularView<Eigen::Upper>().solve(p);

    Mat a = b * (q.norm() * frame_from(q.normalized()));
    AmbientCubic h2 = apply_change(h, LinearChange(a));
    Vec e1 = Vec::Unit(m, 0);

    Mat shear = Mat::Identity(m, m);
    shear.rightCols(m - 1) = shear_columns(gradient(h2, e1));
    Mat cols = shear.rightCols(m - 1);
    Mat g = -0.5 * cols.transpose() * hessian(h2, e1) * cols;
    Mat e = inverse_cholesky(0.5 * (g + g.transpose()));
    Mat norm = Mat::Identity(m, m);
    norm.bottomRightCorner(m - 1, m - 1) = e;
    a = a * shear * norm;
    return finish(h, a, p, rescaled);
}

ReductionResult move_point(const StandardCubic& s, const Vec& z)
{
    require_dim(z.size(), s.n(), "move_point");
    if (!(alpha(s, z) > 0.0))
        fail(ErrorKind::AlphaNonpositive, "alpha(z) <= 0");
    Vec p = phi(s, z);
    AmbientCubic h = s.to_ambient();
    const int m = h.m();
    Mat a = Mat::Zero(m, m);
    a.col(0) = p;
    Mat cols = shear_columns(gradient(h, p));
    Mat g = -0.5 * cols.transpose() * hessian(h, p) * cols;
    a.rightCols(m - 1) = cols * inverse_cholesky(0.5 * (g + g.transpose()));
    return finish(h, a, p, false);
}

Vec phi_differential(const StandardCubic& s, const Vec& z, const Vec& v)
{
    require_dim(v.size(), s.n(), "phi_differential");
    double b = beta(s, z);
    double db = beta_gradient(s, z).dot(v);
    double f = std::cbrt(1.0 / b);
    Vec out(s.n() + 1);
    out[0] = -db / (3.0 * b) * f;
    out.tail(s.n()) = f * v - db / (3.0 * b) * f * z;
    return out;
}

SoNDirectionField::SoNDirectionField(std::vector<Mat> generators) : generators_(std::move(generators))
{
    n_ = static_cast<int>(generators_.size());
    for (const Mat& g : generators_) {
        if (g.rows() != n_ || g.cols() != n_)
            fail(ErrorKind::DimensionMismatch, "generator must be n x n");
        if ((g + g.transpose()).cwiseAbs().maxCoeff() > 1e-12)
            fail(ErrorKind::InvalidArgument, "generator is not antisymmetric");
    }
}

SoNDirectionField SoNDirectionField::zero(int n)
{
    return SoNDirectionField(std::vector<Mat>(n, Mat::Zero(n, n)));
}

Mat SoNDirectionField::apply(const Vec& v) const
{
    require_dim(v.size(), n_, "dB0 argument");
    Mat out = Mat::Zero(n_, n_);
    for (int i = 0; i < n_; ++i)
        out += v[i] * generators_[i];
    return out;
}

SymCubic delta_p3(const StandardCubic& s, const SoNDirectionField& db0, const Vec& v)
{
    const int n = s.n();
    require_dim(db0.n(), n, "delta_p3 direction field");
    require_dim(v.size(), n, "delta_p3 direction");
    Mat w = db0.apply(v) + 1.5 * contract(s.p3(), v);
    const auto& p = s.p3().tensor();
    std::vector<double> t(static_cast<size_t>(n) * n * n, 0.0);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) {
                double acc = 0.0;
                for (int d = 0; d < n; ++d)
                    acc += p[(a * n + b) * n + d] * w(d, c);
                t[(a * n + b) * n + c] = 3.0 * acc - (a == b ? (2.0 / 3.0) * v[c] : 0.0);
            }
    return SymCubic::from_tensor(n, t);
}

} // namespace psr
