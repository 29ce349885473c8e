#ifndef DLOEWNER_LAMBERTW_HPP
#define DLOEWNER_LAMBERTW_HPP

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>

#include "error.hpp"
#include "types.hpp"

namespace dloewner
{

/// Lambert W branch index; 0 is the principal branch.
struct BranchIndex
{
    int k = 0;

    constexpr BranchIndex() = default;
    constexpr explicit BranchIndex(int index) : k(index) {}
    constexpr bool operator==(const BranchIndex&) const = default;
};

namespace detail
{

// Series about the branch point -1/e in p = sqrt(2(e z + 1)):
// W = -1 + p - p^2/3 + 11/72 p^3. The sign of p selects the sheet.
inline Complex lambertw_branch_point_series(Complex z, double sign)
{
    const Complex p = sign * std::sqrt(2.0 * (std::numbers::e * z + 1.0));
    return -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0)));
}

// (3,2) Pade approximant of W_0 about 0.
inline Complex lambertw_pade0(Complex z)
{
    const Complex num = 12.85106382978723404255 + z * (12.34042553191489361902 + z);
    const Complex den = 32.53191489361702127660 + z * (14.34042553191489361702 + z);
    return z * num / den;
}

// log z + 2 pi i k - log(log z + 2 pi i k)
inline Complex lambertw_asymptotic(Complex z, int k)
{
    const Complex l1 = std::log(z) + Complex(0.0, 2.0 * std::numbers::pi * k);
    return l1 - std::log(l1);
}

inline Complex lambertw_initial_guess(Complex z, int k)
{
    const double dist_bp = std::abs(z + std::exp(-1.0));
    if (k == 0)
    {
        if (dist_bp < 0.3)
            return lambertw_branch_point_series(z, 1.0);
        if (-1.0 < z.real() && z.real() < 1.5 && std::abs(z.imag()) < 1.0
            && -2.5 * std::abs(z.imag()) - 0.2 < z.real())
            return lambertw_pade0(z);
        return lambertw_asymptotic(z, k);
    }
    // W_{-1} (upper side, Im z >= 0) and W_1 (lower side) touch the branch point.
    if (dist_bp < 0.3 && ((k == -1 && z.imag() >= 0.0) || (k == 1 && z.imag() < 0.0)))
        return lambertw_branch_point_series(z, -1.0);
    return lambertw_asymptotic(z, k);
}

} // namespace detail

struct LambertOptions
{
    int max_iterations = 100;
    /// Relative Halley step at which iteration stops.
    double step_tolerance = 1e-15;
};

///
/// Branch k of the complex Lambert W function, w exp(w) = z.
///
/// Halley iteration from a branch-aware seed (branch point series near
/// -1/e, Pade approximant near 0 on the principal branch, asymptotic
/// expansion elsewhere). The branch cuts follow the usual convention: along
/// (-inf, -1/e] for k = 0 and along (-inf, 0) for k != 0, with the cut
/// belonging to the upper side (a zero imaginary part is read as +0).
///
/// Throws PreconditionError for z = 0 with k != 0 and ConvergenceError when
/// the iteration stalls.
///
inline Complex lambert_w(Complex z, BranchIndex branch = BranchIndex{0},
                         const LambertOptions& opts = {})
{
    const int k = branch.k;
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw PreconditionError("Lambert W argument must be finite");
    if (z.imag() == 0.0)
        z = Complex(z.real(), 0.0); // normalize -0.0
    if (z == Complex(0.0))
    {
        if (k == 0)
            return 0.0;
        throw PreconditionError("W_k(0) is undefined for k != 0");
    }
    const double inv_e = std::exp(-1.0);
    if (std::abs(z + inv_e) <= 4.0 * std::numeric_limits<double>::epsilon() && z.imag() >= 0.0
        && (k == 0 || k == -1))
        return -1.0;

    Complex w = detail::lambertw_initial_guess(z, k);
    for (int it = 0; it < opts.max_iterations; ++it)
    {
        const Complex ew   = std::exp(w);
        const Complex wew  = w * ew;
        const Complex f    = wew - z;
        const Complex step = f / (wew + ew - (w + 2.0) * f / (2.0 * w + 2.0));
        const Complex next = w - step;
        if (!std::isfinite(next.real()) || !std::isfinite(next.imag()))
            break;
        if (std::abs(step) <= opts.step_tolerance * std::abs(next) || f == Complex(0.0))
            return next;
        w = next;
    }

    // Rounding can keep the step just above target; accept a small residual.
    const Complex residual = w * std::exp(w) - z;
    if (std::isfinite(std::abs(residual))
        && std::abs(residual) <= 1e-13 * std::max(1.0, std::abs(z)))
        return w;

    std::ostringstream os;
    os.precision(17);
    os << "Lambert W failed to converge on branch " << k << " at z = (" << z.real() << ", "
       << z.imag() << ")";
    throw ConvergenceError(os.str());
}

/// Pole of the single-delay model associated with generalized eigenvalue
/// alpha on branch k: lambda = W_k(tau alpha) / tau, so f(lambda) = alpha.
inline Complex delay_pole_from_eigenvalue(Complex alpha, double tau,
                                          BranchIndex branch = BranchIndex{0})
{
    if (!(tau > 0.0))
        throw PreconditionError("delay must be positive to map eigenvalues to poles");
    return lambert_w(tau * alpha, branch) / tau;
}

} // namespace dloewner

#endif /* DLOEWNER_LAMBERTW_HPP */
