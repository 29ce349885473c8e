#ifndef DLOEWNER_TYPES_HPP
#define DLOEWNER_TYPES_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

namespace dloewner
{

using Complex       = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix    = Eigen::MatrixXd;
using Index         = Eigen::Index;

/// Total order on complex points used wherever shifts or poles must be
/// paired: real part, then |imag|, then sign of imag (negative first).
/// Conjugate pairs end up adjacent.
inline bool canonical_less(Complex a, Complex b)
{
    if (a.real() != b.real())
        return a.real() < b.real();
    if (std::abs(a.imag()) != std::abs(b.imag()))
        return std::abs(a.imag()) < std::abs(b.imag());
    return a.imag() < b.imag();
}

/// Permutation sorting `points` by canonical_less (stable).
inline std::vector<std::size_t> canonical_order(const std::vector<Complex>& points)
{
    std::vector<std::size_t> idx(points.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) {
        return canonical_less(points[i], points[j]);
    });
    return idx;
}

/// Relative closeness with a unit floor on the scale.
inline bool nearly_equal(Complex a, Complex b, double rtol)
{
    return std::abs(a - b) <= rtol * std::max({1.0, std::abs(a), std::abs(b)});
}

/// Points logarithmically spaced on [lo, hi], lo and hi > 0.
inline std::vector<double> logspace(double lo, double hi, int n)
{
    std::vector<double> out;
    if (n <= 0)
        return out;
    if (n == 1)
        return {lo};
    const double a = std::log10(lo);
    const double b = std::log10(hi);
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        out.push_back(std::pow(10.0, a + (b - a) * i / (n - 1)));
    return out;
}

} // namespace dloewner

#endif /* DLOEWNER_TYPES_HPP */
