#include "psr/symtensor.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace psr {

const char* kind_name(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NotHyperbolic: return "NotHyperbolic";
    case ErrorKind::LevelMismatch: return "LevelMismatch";
    case ErrorKind::NumericalFailure: return "NumericalFailure";
    case ErrorKind::OutsideDomain: return "OutsideDomain";
    case ErrorKind::AlphaNonpositive: return "AlphaNonpositive";
    case ErrorKind::NoPositiveRoot: return "NoPositiveRoot";
    case ErrorKind::NotCCPSR: return "NotCCPSR";
    case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorKind::DegeneratePlane: return "DegeneratePlane";
    case ErrorKind::StencilExit: return "StencilExit";
    case ErrorKind::EndpointNotClosed: return "EndpointNotClosed";
    case ErrorKind::MalformedInput: return "MalformedInput";
    }
    return "Error";
}

int multiplicity(const Triple& t)
{
    if (t[0] == t[1] && t[1] == t[2])
        return 1;
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2])
        return 3;
    return 6;
}

const std::vector<Triple>& triples(int n)
{
    static std::mutex mu;
    static std::map<int, std::vector<Triple>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end())
        return it->second;
    std::vector<Triple> out;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            for (int k = j; k < n; ++k)
                out.push_back({i, j, k});
    return cache.emplace(n, std::move(out)).first->second;
}

namespace {

size_t triple_index(int n, Triple t)
{
    std::sort(t.begin(), t.end());
    const auto& ts = triples(n);
    auto it = std::lower_bound(ts.begin(), ts.end(), t);
    return static_cast<size_t>(it - ts.begin());
}

} // namespace

SymCubic::SymCubic(int n) : n_(n)
{
    if (n < 1)
        fail(ErrorKind::InvalidArgument, "SymCubic dimension must be positive");
    coeffs_.assign(triples(n).size(), 0.0);
    full_.assign(static_cast<size_t>(n) * n * n, 0.0);
}

SymCubic SymCubic::from_monomials(int n, const std::vector<std::pair<Triple, double>>& terms)
{
    SymCubic p(n);
    for (const auto& [t, c] : terms) {
        for (int idx : t)
            if (idx < 0 || idx >= n)
                fail(ErrorKind::InvalidArgument, "monomial index out of range");
        p.coeffs_[triple_index(n, t)] += c;
    }
    p.rebuild_tensor();
    return p;
}

SymCubic SymCubic::from_coefficients(int n, const std::vector<double>& coeffs)
{
    SymCubic p(n);
    require_dim(static_cast<long>(coeffs.size()), static_cast<long>(p.coeffs_.size()), "coefficient vector");
    p.coeffs_ = coeffs;
    p.rebuild_tensor();
    return p;
}

SymCubic SymCubic::from_tensor(int n, const std::vector<double>& full)
{
    SymCubic p(n);
    require_dim(static_cast<long>(full.size()), static_cast<long>(n) * n * n, "tensor size");
    const auto& ts = triples(n);
    auto at = [&](int a, int b, int c) { return full[(static_cast<size_t>(a) * n + b) * n + c]; };
    for (size_t t = 0; t < ts.size(); ++t) {
        auto idx = ts[t];
        // Sum over distinct permutations gives the monomial coefficient.
        double s = 0.0;
        std::sort(idx.begin(), idx.end());
        do {
            s += at(idx[0], idx[1], idx[2]);
        } while (std::next_permutation(idx.begin(), idx.end()));
        p.coeffs_[t] = s;
    }
    p.rebuild_tensor();
    return p;
}

void SymCubic::rebuild_tensor()
{
    const auto& ts = triples(n_);
    for (size_t t = 0; t < ts.size(); ++t) {
        auto idx = ts[t];
        double e = coeffs_[t] / multiplicity(idx);
        do {
            full_[(static_cast<size_t>(idx[0]) * n_ + idx[1]) * n_ + idx[2]] = e;
        } while (std::next_permutation(idx.begin(), idx.end()));
    }
}

double SymCubic::coeff(int i, int j, int k) const
{
    if (i < 0 || j < 0 || k < 0 || i >= n_ || j >= n_ || k >= n_)
        fail(ErrorKind::InvalidArgument, "index out of range");
    return coeffs_[triple_index(n_, {i, j, k})];
}

double SymCubic::tensor_norm() const
{
    double s = 0.0;
    for (double v : full_)
        s += v * v;
    return std::sqrt(s);
}

SymCubic SymCubic::operator+(const SymCubic& o) const
{
    require_dim(o.n_, n_, "SymCubic sum");
    SymCubic r(n_);
    for (size_t t = 0; t < coeffs_.size(); ++t)
        r.coeffs_[t] = coeffs_[t] + o.coeffs_[t];
    r.rebuild_tensor();
    return r;
}

SymCubic SymCubic::operator-(const SymCubic& o) const { return *this + (-1.0) * o; }

SymCubic SymCubic::operator-() const { return (-1.0) * *this; }

SymCubic operator*(double s, const SymCubic& p)
{
    SymCubic r(p.n_);
    for (size_t t = 0; t < p.coeffs_.size(); ++t)
        r.coeffs_[t] = s * p.coeffs_[t];
    r.rebuild_tensor();
    return r;
}

double eval(const SymCubic& p, const Vec& y)
{
    require_dim(y.size(), p.n(), "eval");
    const auto& ts = triples(p.n());
    const auto& c = p.coefficients();
    double s = 0.0;
    for (size_t t = 0; t < ts.size(); ++t)
        s += c[t] * y[ts[t][0]] * y[ts[t][1]] * y[ts[t][2]];
    return s;
}

double polarize(const SymCubic& p, const Vec& u, const Vec& v, const Vec& w)
{
    const int n = p.n();
    require_dim(u.size(), n, "polarize");
    require_dim(v.size(), n, "polarize");
    require_dim(w.size(), n, "polarize");
    const double* t = p.tensor().data();
    double s = 0.0;
    for (int a = 0; a < n; ++a) {
        double sa = 0.0;
        for (int b = 0; b < n; ++b) {
            double sb = 0.0;
            for (int c = 0; c < n; ++c)
                sb += t[(a * n + b) * n + c] * w[c];
            sa += sb * v[b];
        }
        s += sa * u[a];
    }
    return s;
}

Mat contract(const SymCubic& p, const Vec& z)
{
    const int n = p.n();
    require_dim(z.size(), n, "contract");
    const double* t = p.tensor().data();
    Mat m = Mat::Zero(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) {
            double s = 0.0;
            for (int c = 0; c < n; ++c)
                s += t[(a * n + b) * n + c] * z[c];
            m(a, b) = s;
            m(b, a) = s;
        }
    return m;
}

Vec gradient(const SymCubic& p, const Vec& y)
{
    return 3.0 * contract(p, y) * y;
}

SymCubic pullback(const SymCubic& p, const Mat& m)
{
    const int n = p.n();
    require_dim(m.rows(), n, "pullback rows");
    const int k = static_cast<int>(m.cols());
    const double* t = p.tensor().data();
    // Mode products one index at a time: O(n^3 k + n^2 k^2 + n k^3).
    std::vector<double> s1(static_cast<size_t>(n) * n * k, 0.0);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) {
                double v = t[(a * n + b) * n + c];
                if (v == 0.0)
                    continue;
                for (int r = 0; r < k; ++r)
                    s1[(a * n + b) * k + r] += v * m(c, r);
            }
    std::vector<double> s2(static_cast<size_t>(n) * k * k, 0.0);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int r = 0; r < k; ++r) {
                double v = s1[(a * n + b) * k + r];
                if (v == 0.0)
                    continue;
                for (int q = 0; q < k; ++q)
                    s2[(a * k + q) * k + r] += v * m(b, q);
            }
    std::vector<double> s3(static_cast<size_t>(k) * k * k, 0.0);
    for (int a = 0; a < n; ++a)
        for (int q = 0; q < k; ++q)
            for (int r = 0; r < k; ++r) {
                double v = s2[(a * k + q) * k + r];
                if (v == 0.0)
                    continue;
                for (int o = 0; o < k; ++o)
                    s3[(o * k + q) * k + r] += v * m(a, o);
            }
    return SymCubic::from_tensor(k, s3);
}

} // namespace psr
