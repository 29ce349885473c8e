// Shared fixtures for the unit and acceptance tests.
#ifndef DLOEWNER_TESTS_SUPPORT_HPP
#define DLOEWNER_TESTS_SUPPORT_HPP

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/QR>
#include <unsupported/Eigen/KroneckerProduct>

#include <dloewner/dloewner.hpp>

namespace dltest
{

using namespace dloewner;

/// 1/(s+e^{-s}) + 1/(s+0.3e^{-s}) written as a single fraction.
inline constexpr const char* two_pole_expression =
    "(2*s+1.3*exp(-s))/(s^2+1.3*s*exp(-s)+0.3*exp(-2*s))";

/// The same transfer as an exact order-2 single-delay model.
inline DelayDescriptorModel two_pole_model()
{
    RealMatrix E = RealMatrix::Identity(2, 2);
    RealMatrix A(2, 2);
    A << -1.0, 0.0, 0.0, -0.3;
    RealMatrix B = RealMatrix::Ones(2, 1);
    RealMatrix C = RealMatrix::Ones(1, 2);
    return DelayDescriptorModel::from_real(E, A, B, C, 1.0);
}

inline Complex two_pole_transfer(Complex s)
{
    const Complex e = std::exp(-s);
    return 1.0 / (s + e) + 1.0 / (s + 0.3 * e);
}

inline std::vector<Complex> imag_grid(double lo, double hi, int n)
{
    std::vector<Complex> out;
    for (double w : logspace(lo, hi, n))
        out.emplace_back(0.0, w);
    return out;
}

/// max over the grid of |H - Hr|_F / |H|_F.
inline double max_relative_deviation(const SystemOracle& full, const SystemOracle& red,
                                     const std::vector<Complex>& grid)
{
    double worst = 0.0;
    for (Complex s : grid)
    {
        const ComplexMatrix h = full.eval(s);
        worst = std::max(worst, (h - red.eval(s)).norm() / h.norm());
    }
    return worst;
}

inline Complex random_complex(std::mt19937_64& rng)
{
    std::normal_distribution<double> g;
    return {g(rng), g(rng)};
}

inline ComplexVector random_vector(std::mt19937_64& rng, Index n)
{
    ComplexVector v(n);
    for (Index i = 0; i < n; ++i)
        v(i) = random_complex(rng);
    return v;
}

inline ComplexMatrix random_matrix(std::mt19937_64& rng, Index r, Index c)
{
    ComplexMatrix m(r, c);
    for (Index i = 0; i < r; ++i)
        for (Index j = 0; j < c; ++j)
            m(i, j) = random_complex(rng);
    return m;
}

inline RealMatrix random_real(std::mt19937_64& rng, Index r, Index c)
{
    std::normal_distribution<double> g;
    RealMatrix m(r, c);
    for (Index i = 0; i < r; ++i)
        for (Index j = 0; j < c; ++j)
            m(i, j) = g(rng);
    return m;
}

/// Complex descriptor model with E = I + small perturbation and a generic A.
inline DelayDescriptorModel random_model(std::mt19937_64& rng, Index n, Index ny, Index nu, double tau)
{
    ComplexMatrix E = ComplexMatrix::Identity(n, n) + 0.1 * random_matrix(rng, n, n);
    ComplexMatrix A = random_matrix(rng, n, n) - 2.0 * ComplexMatrix::Identity(n, n);
    return {E, A, random_matrix(rng, n, nu), random_matrix(rng, ny, n), tau};
}

/// Points in the right half plane away from each other, Re in [0.5, 3].
inline std::vector<Complex> random_points(std::mt19937_64& rng, std::size_t count)
{
    std::uniform_real_distribution<double> re(0.5, 3.0), im(-3.0, 3.0);
    std::vector<Complex> out;
    while (out.size() < count)
    {
        const Complex p(re(rng), im(rng));
        bool ok = true;
        for (Complex q : out)
            ok = ok && std::abs(p - q) > 0.3;
        if (ok)
            out.push_back(p);
    }
    return out;
}

///
/// Stable real order-n (n even) state-space plant: n/2 pole pairs
/// -zeta w +- i w sqrt(1 - zeta^2) with w log-uniform on [0.2, 5] and zeta
/// uniform on [0.1, 0.5], hidden by a random orthogonal similarity; random
/// B (n x nu) and C (ny x n). For tau w <= 0.05 the delayed system
/// C (sI - A e^{-s tau})^{-1} B keeps all poles in the left half plane.
///
inline DelayDescriptorModel synthetic_plant(std::uint64_t seed, Index n = 48, Index ny = 1,
                                            Index nu = 1)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> logw(std::log(0.2), std::log(5.0)), zeta(0.1, 0.5);
    RealMatrix D = RealMatrix::Zero(n, n);
    for (Index k = 0; k + 1 < n; k += 2)
    {
        const double w = std::exp(logw(rng)), z = zeta(rng);
        const double a = -z * w, b = w * std::sqrt(1.0 - z * z);
        D(k, k)         = a;
        D(k + 1, k + 1) = a;
        D(k, k + 1)     = b;
        D(k + 1, k)     = -b;
    }
    const RealMatrix Q = Eigen::HouseholderQR<RealMatrix>(random_real(rng, n, n)).householderQ();
    const RealMatrix A = Q * D * Q.transpose();
    return DelayDescriptorModel::from_real(RealMatrix::Identity(n, n), A, random_real(rng, n, nu),
                                           random_real(rng, ny, n), 0.0);
}

/// Random stable real delay-free system with eigenvalue magnitudes in [0.1, 10].
inline DelayDescriptorModel random_stable_system(std::mt19937_64& rng, Index n, Index ny, Index nu)
{
    std::uniform_real_distribution<double> logm(std::log(0.1), std::log(10.0)), ang(0.0, 1.4);
    RealMatrix D = RealMatrix::Zero(n, n);
    Index k = 0;
    while (k < n)
    {
        const double m = std::exp(logm(rng));
        if (k + 1 < n && ang(rng) > 0.5)
        {
            const double th = ang(rng);
            D(k, k) = D(k + 1, k + 1) = -m * std::cos(th);
            D(k, k + 1) = m * std::sin(th);
            D(k + 1, k) = -m * std::sin(th);
            k += 2;
        }
        else
        {
            D(k, k) = -m;
            ++k;
        }
    }
    const RealMatrix T = random_real(rng, n, n) + 3.0 * RealMatrix::Identity(n, n);
    const RealMatrix A = T * D * T.inverse();
    return DelayDescriptorModel::from_real(RealMatrix::Identity(n, n), A, random_real(rng, n, nu),
                                           random_real(rng, ny, n), 0.0);
}

/// H2 norm of C (sI - A)^{-1} B from the controllability Gramian
/// A P + P A^T + B B^T = 0, solved by a Kronecker system (small n only).
inline double lyapunov_h2_norm(const RealMatrix& A, const RealMatrix& B, const RealMatrix& C)
{
    const Index n     = A.rows();
    const RealMatrix I = RealMatrix::Identity(n, n);
    const RealMatrix K = Eigen::kroneckerProduct(I, A) + Eigen::kroneckerProduct(A, I);
    const RealMatrix Q = -B * B.transpose();
    const Eigen::VectorXd p = K.fullPivLu().solve(Eigen::Map<const Eigen::VectorXd>(Q.data(), n * n));
    const RealMatrix P = Eigen::Map<const RealMatrix>(p.data(), n, n);
    return std::sqrt((C * P * C.transpose()).trace());
}

/// Residual of a right/left/bitangential Hermite condition, relative.
inline double hermite_residual(const SystemOracle& full, const DelayDescriptorModel& red, Complex s,
                               const ComplexVector& r, const ComplexVector& l)
{
    const ComplexMatrix h = full.eval(s), hr = red.transfer(s);
    const ComplexMatrix d = full.eval_derivative(s), dr = red.transfer_derivative(s);
    const double right = (h * r - hr * r).norm() / (h * r).norm();
    const double left  = (l.transpose() * (h - hr)).norm() / (l.transpose() * h).norm();
    const Complex a = l.transpose() * d * r, b = l.transpose() * dr * r;
    return std::max({right, left, std::abs(a - b) / std::abs(a)});
}

} // namespace dltest

#endif /* DLOEWNER_TESTS_SUPPORT_HPP */
