#ifndef DLOEWNER_MODEL_HPP
#define DLOEWNER_MODEL_HPP

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/LU>

#include "error.hpp"
#include "types.hpp"

namespace dloewner
{

namespace detail
{

// Below this reciprocal condition estimate the pencil is treated as singular.
inline constexpr double pole_rcond = 1e-20;

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m)
{
    return m.allFinite();
}

} // namespace detail

///
/// Single-delay descriptor realization
///
///   E x'(t) = A x(t - tau) + B u(t),   y(t) = C x(t)
///
/// with transfer H(s) = C (sE - A exp(-tau s))^{-1} B. tau = 0 is the
/// ordinary descriptor system. Matrices are stored complex because
/// interpolants are assembled in complex arithmetic before realification.
///
struct DelayDescriptorModel
{
    ComplexMatrix E;
    ComplexMatrix A;
    ComplexMatrix B;
    ComplexMatrix C;
    double tau = 0.0;

    DelayDescriptorModel() = default;

    DelayDescriptorModel(ComplexMatrix e, ComplexMatrix a, ComplexMatrix b,
                         ComplexMatrix c, double delay = 0.0)
        : E(std::move(e)), A(std::move(a)), B(std::move(b)), C(std::move(c)),
          tau(delay)
    {
        validate();
    }

    static DelayDescriptorModel from_real(const RealMatrix& e, const RealMatrix& a,
                                          const RealMatrix& b, const RealMatrix& c,
                                          double delay = 0.0)
    {
        return {e.cast<Complex>(), a.cast<Complex>(), b.cast<Complex>(),
                c.cast<Complex>(), delay};
    }

    Index order() const noexcept { return A.rows(); }
    Index n_inputs() const noexcept { return B.cols(); }
    Index n_outputs() const noexcept { return C.rows(); }

    void validate() const
    {
        const Index n = A.rows();
        if (n == 0)
            throw PreconditionError("model order must be positive");
        if (A.cols() != n || E.rows() != n || E.cols() != n)
            throw PreconditionError("E and A must be square of equal size");
        if (B.rows() != n || C.cols() != n)
            throw PreconditionError("B and C are not conformable with A");
        if (B.cols() == 0 || C.rows() == 0)
            throw PreconditionError("model needs at least one input and output");
        if (!(tau >= 0.0) || !std::isfinite(tau))
            throw PreconditionError("delay must be finite and nonnegative");
    }

    /// sE - A exp(-tau s)
    ComplexMatrix pencil(Complex s) const
    {
        return s * E - A * std::exp(-tau * s);
    }

    ComplexMatrix transfer(Complex s) const
    {
        Eigen::PartialPivLU<ComplexMatrix> lu = factor(s);
        ComplexMatrix h = C * lu.solve(B);
        if (!detail::all_finite(h))
            throw PoleError(s);
        return h;
    }

    /// H'(s) = -C P^{-1} (E + tau A exp(-tau s)) P^{-1} B, P = sE - A exp(-tau s).
    ComplexMatrix transfer_derivative(Complex s) const
    {
        Eigen::PartialPivLU<ComplexMatrix> lu = factor(s);
        const ComplexMatrix dp = E + tau * std::exp(-tau * s) * A;
        ComplexMatrix x = lu.solve(B);
        ComplexMatrix h = -C * lu.solve(dp * x);
        if (!detail::all_finite(h))
            throw PoleError(s);
        return h;
    }

    /// Same matrices with the delay removed (the G of H(s) = G(s e^{s tau}) e^{s tau}).
    DelayDescriptorModel delay_free() const { return with_delay(0.0); }

    DelayDescriptorModel with_delay(double delay) const
    {
        DelayDescriptorModel m = *this;
        m.tau = delay;
        m.validate();
        return m;
    }

    /// True when every matrix has imaginary parts at most rtol times its norm.
    bool is_real(double rtol = 0.0) const
    {
        auto ok = [rtol](const ComplexMatrix& m) {
            return m.imag().cwiseAbs().maxCoeff() <= rtol * m.norm();
        };
        return ok(E) && ok(A) && ok(B) && ok(C);
    }

private:
    Eigen::PartialPivLU<ComplexMatrix> factor(Complex s) const
    {
        Eigen::PartialPivLU<ComplexMatrix> lu(pencil(s));
        const double rc = lu.rcond();
        if (!(rc > detail::pole_rcond))
            throw PoleError(s);
        return lu;
    }
};

} // namespace dloewner

#endif /* DLOEWNER_MODEL_HPP */
