#pragma once

#include <Eigen/Dense>
#include <array>
#include <utility>
#include <vector>

#include "psr/errors.hpp"

namespace psr {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Sorted index triple i <= j <= k, 0-based.
using Triple = std::array<int, 3>;

// Number of distinct permutations of (i, j, k).
int multiplicity(const Triple& t);

// All sorted triples for dimension n, in lexicographic order.
const std::vector<Triple>& triples(int n);

// Symmetric cubic form P(y) = sum_{i<=j<=k} c_ijk y_i y_j y_k on R^n.
// Immutable once built; the full n^3 tensor is kept alongside the monomial
// coefficients.
class SymCubic {
public:
    SymCubic() = default;
    explicit SymCubic(int n);

    static SymCubic from_monomials(int n, const std::vector<std::pair<Triple, double>>& terms);
    // Coefficient vector in the order of triples(n).
    static SymCubic from_coefficients(int n, const std::vector<double>& coeffs);
    // Symmetrizes an arbitrary n^3 array (row-major, index (a*n + b)*n + c).
    static SymCubic from_tensor(int n, const std::vector<double>& full);

    int n() const { return n_; }
    // Monomial coefficient for an index triple in any order.
    double coeff(int i, int j, int k) const;
    // Tensor entry P_ijk = coeff / multiplicity.
    double entry(int i, int j, int k) const { return full_[(static_cast<size_t>(i) * n_ + j) * n_ + k]; }
    const std::vector<double>& coefficients() const { return coeffs_; }
    const std::vector<double>& tensor() const { return full_; }

    // sqrt(sum over all i,j,k of P_ijk^2)
    double tensor_norm() const;

    SymCubic operator+(const SymCubic& o) const;
    SymCubic operator-(const SymCubic& o) const;
    SymCubic operator-() const;
    friend SymCubic operator*(double s, const SymCubic& p);

private:
    void rebuild_tensor();

    int n_ = 0;
    std::vector<double> coeffs_;
    std::vector<double> full_;
};

double eval(const SymCubic& p, const Vec& y);
double polarize(const SymCubic& p, const Vec& u, const Vec& v, const Vec& w);
// M_ab = P(z, e_a, e_b)
Mat contract(const SymCubic& p, const Vec& z);
// grad P(y)_k = 3 P(y, y, e_k)
Vec gradient(const SymCubic& p, const Vec& y);
// Q(y) = P(M y). M has p.n() rows; Q lives on R^{cols(M)}.
SymCubic pullback(const SymCubic& p, const Mat& m);

} // namespace psr
