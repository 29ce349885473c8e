#ifndef DLOEWNER_ORACLE_HPP
#define DLOEWNER_ORACLE_HPP

#include <functional>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "expression.hpp"
#include "model.hpp"
#include "types.hpp"

namespace dloewner
{

enum class DerivativeMode
{
    analytic,
    finite_difference
};

///
/// A linear system known only through evaluations of H(s) and H'(s).
///
/// Oracles are immutable after construction; the stored callables only
/// capture shared, const state, so a single oracle may be evaluated from
/// several threads at once and copied freely.
///
class SystemOracle
{
public:
    using Evaluator = std::function<ComplexMatrix(Complex)>;

    SystemOracle(Index n_outputs, Index n_inputs, Evaluator eval, Evaluator derivative,
                 DerivativeMode mode, bool real_symmetric, std::string description = {})
        : n_outputs_(n_outputs),
          n_inputs_(n_inputs),
          eval_(std::move(eval)),
          derivative_(std::move(derivative)),
          mode_(mode),
          real_symmetric_(real_symmetric),
          description_(std::move(description))
    {
        if (n_outputs_ <= 0 || n_inputs_ <= 0)
            throw PreconditionError("oracle dimensions must be positive");
        if (!eval_)
            throw PreconditionError("oracle needs an evaluator");
        if (!derivative_)
        {
            derivative_ = central_difference(eval_);
            mode_       = DerivativeMode::finite_difference;
        }
    }

    /// Oracle from a plain callable; H' by central differences.
    static SystemOracle from_function(Index n_outputs, Index n_inputs, Evaluator eval,
                                      bool real_symmetric = true,
                                      std::string description = "function")
    {
        return {n_outputs, n_inputs, std::move(eval), nullptr,
                DerivativeMode::finite_difference, real_symmetric, std::move(description)};
    }

    Index n_inputs() const noexcept { return n_inputs_; }
    Index n_outputs() const noexcept { return n_outputs_; }
    DerivativeMode derivative_mode() const noexcept { return mode_; }
    /// eval(conj s) == conj(eval(s)) holds by construction.
    bool real_symmetric() const noexcept { return real_symmetric_; }
    const std::string& description() const noexcept { return description_; }

    ComplexMatrix eval(Complex s) const
    {
        ComplexMatrix h = eval_(s);
        check_shape(h);
        return h;
    }

    ComplexMatrix eval_derivative(Complex s) const
    {
        ComplexMatrix h = derivative_(s);
        check_shape(h);
        return h;
    }

    /// Step used by finite-difference derivatives: cbrt(eps) * max(1, |s|).
    static double difference_step(Complex s)
    {
        return 6.0554544523933395e-06 * std::max(1.0, std::abs(s));
    }

private:
    static Evaluator central_difference(Evaluator f)
    {
        return [f = std::move(f)](Complex s) -> ComplexMatrix {
            const double h = difference_step(s);
            return (f(s + h) - f(s - h)) / (2.0 * h);
        };
    }

    void check_shape(const ComplexMatrix& h) const
    {
        if (h.rows() != n_outputs_ || h.cols() != n_inputs_)
            throw PreconditionError("oracle returned a matrix of unexpected shape");
    }

    Index n_outputs_;
    Index n_inputs_;
    Evaluator eval_;
    Evaluator derivative_;
    DerivativeMode mode_;
    bool real_symmetric_;
    std::string description_;
};

/// Oracle of a (delay) descriptor model. Derivative via the resolvent identity.
inline SystemOracle from_model(const DelayDescriptorModel& model)
{
    model.validate();
    auto m = std::make_shared<const DelayDescriptorModel>(model);
    return {m->n_outputs(),
            m->n_inputs(),
            [m](Complex s) { return m->transfer(s); },
            [m](Complex s) { return m->transfer_derivative(s); },
            DerivativeMode::analytic,
            m->is_real(),
            "state-space(order=" + std::to_string(m->order()) + ")"};
}

/// H(s) = C (sE - A exp(-tau s))^{-1} B from real matrices.
inline SystemOracle from_state_space(const RealMatrix& E, const RealMatrix& A,
                                     const RealMatrix& B, const RealMatrix& C,
                                     double tau = 0.0)
{
    return from_model(DelayDescriptorModel::from_real(E, A, B, C, tau));
}

/// SISO oracle of a parsed expression in s.
inline SystemOracle from_expression(std::string_view text)
{
    auto expr = std::make_shared<const Expression>(Expression::parse(text));
    return {1,
            1,
            [expr](Complex s) {
                ComplexMatrix h(1, 1);
                h(0, 0) = expr->value(s);
                return h;
            },
            [expr](Complex s) {
                ComplexMatrix h(1, 1);
                h(0, 0) = expr->derivative(s);
                return h;
            },
            DerivativeMode::analytic,
            true,
            "expression(" + expr->text() + ")"};
}

namespace detail
{

struct SampleTable
{
    std::vector<Complex> points;
    std::vector<ComplexMatrix> values;
    std::optional<std::vector<ComplexMatrix>> derivatives;

    // Query points match with relative tolerance 1e-12.
    std::size_t find(Complex s) const
    {
        for (std::size_t i = 0; i < points.size(); ++i)
            if (std::abs(s - points[i]) <= 1e-12 * std::max(1.0, std::abs(points[i])))
                return i;
        std::ostringstream os;
        os.precision(17);
        os << "point not tabulated: (" << s.real() << ", " << s.imag() << ")";
        throw LookupError(os.str());
    }
};

} // namespace detail

///
/// Oracle valid only at tabulated points, for data-driven interpolation.
/// Derivative queries fail unless derivative values were supplied.
///
inline SystemOracle from_samples(std::vector<Complex> points, std::vector<ComplexMatrix> values,
                                 std::optional<std::vector<ComplexMatrix>> derivatives = std::nullopt)
{
    if (points.empty())
        throw PreconditionError("sample table is empty");
    if (values.size() != points.size())
        throw PreconditionError("number of values does not match number of points");
    if (derivatives && derivatives->size() != points.size())
        throw PreconditionError("number of derivative values does not match number of points");
    const Index ny = values.front().rows();
    const Index nu = values.front().cols();
    for (std::size_t i = 0; i < points.size(); ++i)
    {
        if (values[i].rows() != ny || values[i].cols() != nu)
            throw PreconditionError("sample values have inconsistent shapes");
        if (derivatives && ((*derivatives)[i].rows() != ny || (*derivatives)[i].cols() != nu))
            throw PreconditionError("derivative values have inconsistent shapes");
        for (std::size_t j = 0; j < i; ++j)
            if (std::abs(points[i] - points[j]) <= 1e-12 * std::max(1.0, std::abs(points[j])))
                throw PreconditionError("sample points must be distinct");
    }

    auto table = std::make_shared<const detail::SampleTable>(
        detail::SampleTable{std::move(points), std::move(values), std::move(derivatives)});

    // Real symmetry holds only if the table is itself conjugate-closed; callers
    // needing it construct closed tables, so we do not claim it.
    return {ny,
            nu,
            [table](Complex s) { return table->values[table->find(s)]; },
            [table](Complex s) -> ComplexMatrix {
                const std::size_t i = table->find(s);
                if (!table->derivatives)
                    throw PreconditionError("derivative data not supplied for sampled oracle");
                return (*table->derivatives)[i];
            },
            DerivativeMode::analytic,
            false,
            "samples(n=" + std::to_string(table->points.size()) + ")"};
}

} // namespace dloewner

#endif /* DLOEWNER_ORACLE_HPP */
