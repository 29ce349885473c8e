#ifndef DLOEWNER_DELAY_LOEWNER_HPP
#define DLOEWNER_DELAY_LOEWNER_HPP

#include <optional>
#include <vector>

#include "error.hpp"
#include "loewner.hpp"
#include "oracle.hpp"
#include "types.hpp"

namespace dloewner
{

/// f(s) = s exp(s tau). A single-delay transfer satisfies
/// H_d(s) = G(f(s)) exp(s tau), G being the delay-free transfer of the same
/// matrices.
inline Complex substitution_map(Complex s, double tau)
{
    return s * std::exp(s * tau);
}

/// f'(s) = exp(s tau) (1 + tau s)
inline Complex substitution_derivative(Complex s, double tau)
{
    return std::exp(s * tau) * (1.0 + tau * s);
}

/// Relative separation required between images under f.
inline constexpr double injectivity_tolerance = 1e-10;

struct InjectivityViolation
{
    std::size_t first;
    std::size_t second;
};

/// First pair (i < j) with |f(p_i) - f(p_j)| <= tol max(1, |f(p_i)|), if any.
inline std::optional<InjectivityViolation>
check_injectivity(const std::vector<Complex>& points, double tau,
                  double tol = injectivity_tolerance)
{
    std::vector<Complex> images;
    images.reserve(points.size());
    for (Complex p : points)
        images.push_back(substitution_map(p, tau));
    for (std::size_t i = 0; i < images.size(); ++i)
        for (std::size_t j = i + 1; j < images.size(); ++j)
            if (!(std::abs(images[i] - images[j]) > tol * std::max(1.0, std::abs(images[i]))))
                return InjectivityViolation{i, j};
    return std::nullopt;
}

namespace detail
{

inline void require_injective(const std::vector<Complex>& points, double tau)
{
    if (auto v = check_injectivity(points, tau))
        throw InjectivityError(v->first, v->second, points[v->first], points[v->second]);
}

inline void require_delay(double tau)
{
    if (!(tau >= 0.0) || !std::isfinite(tau))
        throw PreconditionError("delay must be finite and nonnegative");
}

} // namespace detail

///
/// Single-delay interpolant of tangential data. The delay-free Loewner
/// realization is built from the transformed data
/// (f(lambda_i), r_i, w_i e^{-lambda_i tau}) and (f(mu_j), l_j, v_j e^{-mu_j tau})
/// and the delay attached; then H_d(lambda_i) r_i = w_i and
/// l_j H_d(mu_j) = v_j.
///
inline Interpolant build_delay_loewner(const TangentialData& data, double tau,
                                       const LoewnerOptions& opts = {})
{
    data.validate();
    detail::require_delay(tau);
    std::vector<Complex> all_points;
    for (const auto& t : data.right)
        all_points.push_back(t.point);
    for (const auto& t : data.left)
        all_points.push_back(t.point);
    detail::require_injective(all_points, tau);

    TangentialData mapped = data;
    for (auto& t : mapped.right)
    {
        t.response = t.response * std::exp(-t.point * tau);
        t.point    = substitution_map(t.point, tau);
    }
    for (auto& t : mapped.left)
    {
        t.response = t.response * std::exp(-t.point * tau);
        t.point    = substitution_map(t.point, tau);
    }
    Interpolant out = loewner_interpolant(mapped, opts);
    out.model.tau   = tau;
    return out;
}

/// Value and derivative of G at f(s) given H(s), H'(s):
///   G(f(s))  = H(s) e^{-s tau}
///   G'(f(s)) = (H'(s) - tau H(s)) e^{-2 s tau} / (1 + tau s)
struct TransformedSample
{
    Complex point;
    ComplexMatrix value;
    ComplexMatrix derivative;
};

inline TransformedSample transform_hermite_sample(Complex s, const ComplexMatrix& h,
                                                  const ComplexMatrix& dh, double tau)
{
    const Complex e = std::exp(-s * tau);
    return {substitution_map(s, tau), h * e, (dh - tau * h) * (e * e / (1.0 + tau * s))};
}

///
/// Single-delay bitangential Hermite interpolant: the delay-free Hermite
/// construction at sigma_i = f(s_i) with the transformed values and
/// derivatives. The result matches H(s_k) r_k, l_k H(s_k) and
/// l_k H'(s_k) r_k at the original shifts.
///
inline Interpolant build_hermite_delay_loewner(const SystemOracle& oracle,
                                               const std::vector<Complex>& shifts,
                                               const std::vector<ComplexVector>& right_dirs,
                                               const std::vector<ComplexVector>& left_dirs,
                                               double tau, const LoewnerOptions& opts = {})
{
    detail::require_delay(tau);
    detail::check_distinct(shifts);
    detail::require_injective(shifts, tau);
    for (Complex s : shifts)
        if (!(std::abs(1.0 + tau * s) > 1e-8))
            throw PreconditionError("shift at s = -1/tau: the substitution map has a critical "
                                    "point there and Hermite data is undefined");

    std::vector<Complex> sigma;
    std::vector<ComplexMatrix> values, derivatives;
    for (Complex s : shifts)
    {
        TransformedSample t = transform_hermite_sample(s, oracle.eval(s), oracle.eval_derivative(s), tau);
        sigma.push_back(t.point);
        values.push_back(std::move(t.value));
        derivatives.push_back(std::move(t.derivative));
    }
    Interpolant out = hermite_interpolant(sigma, values, derivatives, right_dirs, left_dirs, opts);
    out.model.tau   = tau;
    return out;
}

} // namespace dloewner

#endif /* DLOEWNER_DELAY_LOEWNER_HPP */
