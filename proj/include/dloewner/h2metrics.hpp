#ifndef DLOEWNER_H2METRICS_HPP
#define DLOEWNER_H2METRICS_HPP

#include <cmath>
#include <functional>
#include <numbers>
#include <ostream>
#include <queue>
#include <string>
#include <vector>

#include <Eigen/SVD>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "error.hpp"
#include "oracle.hpp"
#include "types.hpp"

namespace dloewner
{

namespace detail
{

struct QuadratureSum
{
    double value = 0.0;
    double error = 0.0;
};

// Kronrod 15 / Gauss 7 pair on [a, b].
template <class F>
QuadratureSum gk15(F& f, double a, double b)
{
    using boost::math::quadrature::gauss;
    using boost::math::quadrature::gauss_kronrod;
    const auto& x  = gauss_kronrod<double, 15>::abscissa();
    const auto& wk = gauss_kronrod<double, 15>::weights();
    const auto& wg = gauss<double, 7>::weights();
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const double f0 = f(c);
    double k = wk[0] * f0, g = wg[0] * f0;
    for (std::size_t i = 1; i < x.size(); ++i)
    {
        const double fs = f(c - h * x[i]) + f(c + h * x[i]);
        k += wk[i] * fs;
        if (i % 2 == 0)
            g += wg[i / 2] * fs;
    }
    return {k * h, std::abs(k - g) * h};
}

struct Panel
{
    double a, b;
    QuadratureSum q;

    bool operator<(const Panel& o) const { return q.error < o.q.error; }
};

// Globally adaptive: split the panel with the largest error estimate until
// the summed error meets max(rel_tol |I|, abs_tol) or the budget runs out.
template <class F>
QuadratureSum adaptive_gk(F& f, const std::vector<double>& edges, double rel_tol, double abs_tol,
                          std::size_t max_panels)
{
    std::priority_queue<Panel> heap;
    QuadratureSum total;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i)
    {
        const QuadratureSum q = gk15(f, edges[i], edges[i + 1]);
        total.value += q.value;
        total.error += q.error;
        heap.push({edges[i], edges[i + 1], q});
    }
    while (heap.size() < max_panels && total.error > std::max(rel_tol * std::abs(total.value), abs_tol))
    {
        const Panel p = heap.top();
        heap.pop();
        const double m = 0.5 * (p.a + p.b);
        const QuadratureSum l = gk15(f, p.a, m), r = gk15(f, m, p.b);
        total.value += l.value + r.value - p.q.value;
        total.error += l.error + r.error - p.q.error;
        heap.push({p.a, m, l});
        heap.push({m, p.b, r});
    }
    // Recompute the sums to drop accumulated cancellation error.
    total = {};
    while (!heap.empty())
    {
        total.value += heap.top().q.value;
        total.error += heap.top().q.error;
        heap.pop();
    }
    return total;
}

} // namespace detail

struct QuadratureOptions
{
    /// Upper end of the integration range; the rest is a c / w^2 tail.
    double omega_max = 1e4;
    /// Right edge of the first panel [0, omega_first]; decades follow.
    double omega_first = 1e-4;
    double rel_tol = 1e-10;
    /// Subinterval budget of the adaptive rule.
    std::size_t max_panels = 1000;
    /// Tail estimate larger than this fraction of the integral is an error.
    double tail_tolerance = 1e-2;
    /// Integrate [0, inf) only and double it (H(-iw) = conj H(iw)).
    bool real_symmetric = true;
};

struct H2Estimate
{
    double value = 0.0;
    /// Estimated absolute error of `value` (quadrature plus tail).
    double abs_error = 0.0;
    /// Tail contribution to the squared norm times 2 pi.
    double tail = 0.0;
};

///
/// H2 norm of a matrix function given on the imaginary axis,
///
///   ||F||^2 = 1/(2 pi) int_{-inf}^{inf} ||F(i w)||_F^2 dw,
///
/// by adaptive Gauss-Kronrod (15 points) on decade panels of [0, omega_max]
/// and an analytic c / w^2 tail fitted at omega_max. The 1/(2 pi) factor
/// makes ||1/(s+1)|| = 1/sqrt(2).
///
inline H2Estimate h2_norm_estimate(const std::function<ComplexMatrix(Complex)>& f,
                                   const QuadratureOptions& opts = {},
                                   std::function<double(double)> reference = {})
{
    if (!(opts.omega_max > opts.omega_first) || !(opts.omega_first > 0.0))
        throw PreconditionError("quadrature range must satisfy 0 < omega_first < omega_max");

    auto integrand = [&](double w) {
        double v = f(Complex(0.0, w)).squaredNorm();
        if (!opts.real_symmetric)
            v += f(Complex(0.0, -w)).squaredNorm();
        return v;
    };

    std::vector<double> edges{0.0, opts.omega_first};
    for (double e = opts.omega_first * 10.0; e < opts.omega_max * (1.0 - 1e-12); e *= 10.0)
        edges.push_back(e);
    edges.push_back(opts.omega_max);

    // Absolute floor from the reference scale, so integrands that are
    // negligible against it are not refined to relative accuracy.
    double floor = 0.0;
    if (reference)
        for (std::size_t i = 0; i + 1 < edges.size(); ++i)
            floor += 1e-4 * opts.rel_tol * std::abs(detail::gk15(reference, edges[i], edges[i + 1]).value);

    const detail::QuadratureSum q =
        detail::adaptive_gk(integrand, edges, opts.rel_tol, floor, opts.max_panels);
    double integral = q.value;
    const double error = q.error;

    const double c    = integrand(opts.omega_max) * opts.omega_max * opts.omega_max;
    const double tail = c / opts.omega_max;
    if (tail > opts.tail_tolerance * std::max(integral, floor) && tail > 1e-300)
        throw ConvergenceError("integrand does not decay: not in H2 or omega_max too small");
    integral += tail;

    const double factor = opts.real_symmetric ? 1.0 / std::numbers::pi : 0.5 / std::numbers::pi;
    H2Estimate out;
    out.value     = std::sqrt(std::max(0.0, integral * factor));
    out.tail      = tail * factor;
    const double sq_err = (error + tail) * factor;
    out.abs_error = out.value > 0.0 ? sq_err / (2.0 * out.value) : std::sqrt(sq_err);
    return out;
}

/// The error integral is refined only down to rel_tol * 1e-4 * (||a||^2 + ||b||^2).
inline H2Estimate h2_error_estimate(const SystemOracle& a, const SystemOracle& b,
                                    QuadratureOptions opts = {})
{
    if (a.n_inputs() != b.n_inputs() || a.n_outputs() != b.n_outputs())
        throw PreconditionError("systems have different input/output dimensions");
    opts.real_symmetric = opts.real_symmetric && a.real_symmetric() && b.real_symmetric();
    const bool sym = opts.real_symmetric;
    auto reference = [&](double w) {
        double v = a.eval(Complex(0.0, w)).squaredNorm() + b.eval(Complex(0.0, w)).squaredNorm();
        if (!sym)
            v += a.eval(Complex(0.0, -w)).squaredNorm() + b.eval(Complex(0.0, -w)).squaredNorm();
        return v;
    };
    return h2_norm_estimate([&](Complex s) -> ComplexMatrix { return a.eval(s) - b.eval(s); },
                            opts, reference);
}

/// ||a - b||_H2 by quadrature.
inline double h2_error(const SystemOracle& a, const SystemOracle& b,
                       const QuadratureOptions& opts = {})
{
    return h2_error_estimate(a, b, opts).value;
}

inline double h2_norm(const SystemOracle& a, QuadratureOptions opts = {})
{
    opts.real_symmetric = opts.real_symmetric && a.real_symmetric();
    return h2_norm_estimate([&](Complex s) { return a.eval(s); }, opts).value;
}

/// One frequency of a response table. Failed evaluations keep `error` set
/// and leave the numeric fields empty.
struct ResponseRow
{
    double omega = 0.0;
    ComplexMatrix value;
    Eigen::VectorXd singular_values;
    Eigen::MatrixXd magnitude_db;
    Eigen::MatrixXd phase_deg; // unwrapped per channel along the grid
    std::string error;

    bool ok() const { return error.empty(); }
};

struct FrequencyResponse
{
    Index n_outputs = 0;
    Index n_inputs = 0;
    std::vector<ResponseRow> rows;
};

inline FrequencyResponse frequency_response(const SystemOracle& oracle,
                                            const std::vector<double>& omega)
{
    for (std::size_t i = 0; i < omega.size(); ++i)
        if (!(omega[i] > 0.0) || (i > 0 && !(omega[i] > omega[i - 1])))
            throw PreconditionError("frequency grid must be positive and ascending");

    FrequencyResponse out;
    out.n_outputs = oracle.n_outputs();
    out.n_inputs  = oracle.n_inputs();
    const Index ny = out.n_outputs, nu = out.n_inputs;
    Eigen::MatrixXd last_phase;
    bool have_last = false;
    for (double w : omega)
    {
        ResponseRow row;
        row.omega = w;
        try
        {
            row.value = oracle.eval(Complex(0.0, w));
        }
        catch (const Error& e)
        {
            row.error = e.what();
            out.rows.push_back(std::move(row));
            continue;
        }
        row.singular_values = Eigen::JacobiSVD<ComplexMatrix>(row.value).singularValues();
        row.magnitude_db.resize(ny, nu);
        row.phase_deg.resize(ny, nu);
        for (Index i = 0; i < ny; ++i)
            for (Index j = 0; j < nu; ++j)
            {
                const Complex h = row.value(i, j);
                row.magnitude_db(i, j) = 20.0 * std::log10(std::abs(h));
                double ph = std::arg(h);
                if (have_last)
                {
                    const double prev = last_phase(i, j);
                    ph += 2.0 * std::numbers::pi * std::round((prev - ph) / (2.0 * std::numbers::pi));
                }
                row.phase_deg(i, j) = ph * 180.0 / std::numbers::pi;
            }
        last_phase = row.phase_deg * (std::numbers::pi / 180.0);
        have_last  = true;
        out.rows.push_back(std::move(row));
    }
    return out;
}

namespace detail
{

inline std::string channel_suffix(Index i, Index j)
{
    if (i < 9 && j < 9)
        return std::to_string(i + 1) + std::to_string(j + 1);
    return std::to_string(i + 1) + "_" + std::to_string(j + 1);
}

} // namespace detail

///
/// CSV with columns: omega, then per channel (i, j) re_ij, im_ij, mag_db_ij,
/// phase_deg_ij, then sigma_1 .. sigma_m, then error. Channel indices are
/// 1-based and joined with '_' once either exceeds 9.
///
inline void write_response_csv(std::ostream& os, const FrequencyResponse& resp)
{
    const Index ny = resp.n_outputs, nu = resp.n_inputs;
    const Index ns = std::min(ny, nu);
    os << "omega";
    for (Index i = 0; i < ny; ++i)
        for (Index j = 0; j < nu; ++j)
        {
            const std::string c = detail::channel_suffix(i, j);
            os << ",re_" << c << ",im_" << c << ",mag_db_" << c << ",phase_deg_" << c;
        }
    for (Index k = 0; k < ns; ++k)
        os << ",sigma_" << (k + 1);
    os << ",error\n";

    const auto old_precision = os.precision(17);
    for (const auto& row : resp.rows)
    {
        os << row.omega;
        for (Index i = 0; i < ny; ++i)
            for (Index j = 0; j < nu; ++j)
            {
                if (row.ok())
                    os << ',' << row.value(i, j).real() << ',' << row.value(i, j).imag() << ','
                       << row.magnitude_db(i, j) << ',' << row.phase_deg(i, j);
                else
                    os << ",,,,";
            }
        for (Index k = 0; k < ns; ++k)
        {
            os << ',';
            if (row.ok())
                os << row.singular_values(k);
        }
        std::string msg = row.error;
        for (char& ch : msg)
            if (ch == ',' || ch == '\n' || ch == '"')
                ch = ' ';
        os << ',' << msg << '\n';
    }
    os.precision(old_precision);
}

} // namespace dloewner

#endif /* DLOEWNER_H2METRICS_HPP */
