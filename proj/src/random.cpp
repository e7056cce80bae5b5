#include "psr/random.hpp"

namespace psr {

Vec random_gaussian(Rng& rng, int n)
{
    std::normal_distribution<double> nd(0.0, 1.0);
    Vec v(n);
    for (int i = 0; i < n; ++i)
        v[i] = nd(rng);
    return v;
}

Vec random_unit(Rng& rng, int n)
{
    for (;;) {
        Vec v = random_gaussian(rng, n);
        double norm = v.norm();
        if (norm > 1e-12)
            return v / norm;
    }
}

SymCubic random_cubic(Rng& rng, int n)
{
    std::normal_distribution<double> nd(0.0, 1.0);
    std::vector<double> c(triples(n).size());
    for (double& v : c)
        v = nd(rng);
    return SymCubic::from_coefficients(n, c);
}

} // namespace psr
