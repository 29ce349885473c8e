#ifndef DLOEWNER_SPECTRAL_HPP
#define DLOEWNER_SPECTRAL_HPP

#include <cstddef>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "error.hpp"
#include "lambertw.hpp"
#include "model.hpp"
#include "types.hpp"

extern "C" {
// LAPACK complex QZ driver (gfortran calling convention).
void zggev_(const char* jobvl, const char* jobvr, const int* n, std::complex<double>* a,
            const int* lda, std::complex<double>* b, const int* ldb,
            std::complex<double>* alpha, std::complex<double>* beta,
            std::complex<double>* vl, const int* ldvl, std::complex<double>* vr,
            const int* ldvr, std::complex<double>* work, const int* lwork, double* rwork,
            int* info, std::size_t jobvl_len, std::size_t jobvr_len);
}

namespace dloewner
{

///
/// Eigen-decomposition of the pencil (A, E) of a model:
///   A x_i = lambda_i E x_i,   y_i^* A = lambda_i y_i^* E,   y_i^* E x_j = delta_ij.
///
/// With b_i^T = y_i^* B and c_i = C x_i the delay-free transfer is
/// sum_i c_i b_i^T / (s - lambda_i) and the delay transfer
/// sum_i c_i b_i^T / (s - lambda_i exp(-s tau)).
///
struct SpectralDecomposition
{
    std::vector<Complex> eigenvalues;
    ComplexMatrix right_vectors; // columns x_i
    ComplexMatrix left_vectors;  // rows y_i^*
    std::vector<ComplexVector> b_dirs; // (y_i^* B)^T, length n_inputs
    std::vector<ComplexVector> c_dirs; // C x_i, length n_outputs
    /// Smallest relative distance between two eigenvalues.
    double min_relative_gap = 0.0;
    std::vector<std::string> warnings;

    /// Pole-residue form of the model transfer, tau = 0 for the delay-free one.
    ComplexMatrix residue_transfer(Complex s, double tau = 0.0) const
    {
        ComplexMatrix h = ComplexMatrix::Zero(c_dirs.front().size(), b_dirs.front().size());
        const Complex e = std::exp(-s * tau);
        for (std::size_t i = 0; i < eigenvalues.size(); ++i)
            h += c_dirs[i] * b_dirs[i].transpose() / (s - eigenvalues[i] * e);
        return h;
    }
};

namespace detail
{

struct QzResult
{
    std::vector<Complex> alpha;
    std::vector<Complex> beta;
    ComplexMatrix vl;
    ComplexMatrix vr;
};

inline QzResult qz(const ComplexMatrix& A, const ComplexMatrix& E, bool vectors)
{
    const int n = static_cast<int>(A.rows());
    ComplexMatrix a = A, b = E;
    QzResult out;
    out.alpha.resize(static_cast<std::size_t>(n));
    out.beta.resize(static_cast<std::size_t>(n));
    out.vl.resize(n, n);
    out.vr.resize(n, n);
    const char job = vectors ? 'V' : 'N';
    std::vector<double> rwork(static_cast<std::size_t>(8 * n));
    int lwork = -1;
    int info  = 0;
    Complex query;
    zggev_(&job, &job, &n, a.data(), &n, b.data(), &n, out.alpha.data(), out.beta.data(),
           out.vl.data(), &n, out.vr.data(), &n, &query, &lwork, rwork.data(), &info, 1, 1);
    lwork = std::max(1, static_cast<int>(query.real()));
    std::vector<Complex> work(static_cast<std::size_t>(lwork));
    zggev_(&job, &job, &n, a.data(), &n, b.data(), &n, out.alpha.data(), out.beta.data(),
           out.vl.data(), &n, out.vr.data(), &n, work.data(), &lwork, rwork.data(), &info, 1, 1);
    if (info != 0)
        throw SpectralError("QZ iteration failed (zggev info = " + std::to_string(info) + ")");
    return out;
}

inline std::vector<Complex> finite_eigenvalues(const QzResult& qz, const ComplexMatrix& A,
                                               const ComplexMatrix& E)
{
    std::vector<Complex> lambda;
    const double scale_a = A.norm();
    const double scale_e = E.norm();
    for (std::size_t i = 0; i < qz.alpha.size(); ++i)
    {
        // beta ~ 0 relative to alpha: infinite eigenvalue, E singular on that direction.
        if (std::abs(qz.beta[i]) * std::max(scale_a, 1e-300)
            <= 1e-13 * std::abs(qz.alpha[i]) * std::max(scale_e, 1e-300))
            throw SpectralError("pencil has an infinite eigenvalue (E is singular); "
                                "the model is not diagonalizable in pole-residue form");
        lambda.push_back(qz.alpha[i] / qz.beta[i]);
    }
    return lambda;
}

} // namespace detail

/// Generalized eigenvalues of (A, E) only.
inline std::vector<Complex> generalized_eigenvalues(const DelayDescriptorModel& model)
{
    model.validate();
    detail::QzResult r = detail::qz(model.A, model.E, false);
    return detail::finite_eigenvalues(r, model.A, model.E);
}

inline SpectralDecomposition decompose(const DelayDescriptorModel& model)
{
    model.validate();
    const Index n       = model.order();
    detail::QzResult qz = detail::qz(model.A, model.E, true);

    SpectralDecomposition out;
    out.eigenvalues = detail::finite_eigenvalues(qz, model.A, model.E);

    // Biorthonormalize by scaling the left vectors: y_i = vl_i / conj(d_i).
    const ComplexMatrix d = qz.vl.adjoint() * model.E * qz.vr;
    const double e_norm   = model.E.norm();
    ComplexMatrix Y       = qz.vl;
    for (Index i = 0; i < n; ++i)
    {
        const double scale = qz.vl.col(i).norm() * qz.vr.col(i).norm() * e_norm;
        if (!(std::abs(d(i, i)) > 1e-13 * scale))
            throw SpectralError("pencil not diagonalizable: left and right eigenvectors #"
                                + std::to_string(i) + " are E-orthogonal");
        Y.col(i) /= std::conj(d(i, i));
    }
    out.right_vectors = qz.vr;
    out.left_vectors  = Y.adjoint();

    const ComplexMatrix yb = out.left_vectors * model.B;
    const ComplexMatrix cx = model.C * out.right_vectors;
    for (Index i = 0; i < n; ++i)
    {
        out.b_dirs.emplace_back(yb.row(i).transpose());
        out.c_dirs.emplace_back(cx.col(i));
    }

    out.min_relative_gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < out.eigenvalues.size(); ++i)
        for (std::size_t j = i + 1; j < out.eigenvalues.size(); ++j)
        {
            const Complex a = out.eigenvalues[i], b = out.eigenvalues[j];
            out.min_relative_gap = std::min(
                out.min_relative_gap, std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}));
        }
    if (out.min_relative_gap < 1e-8)
    {
        std::ostringstream os;
        os << "nearly repeated eigenvalues (relative gap " << out.min_relative_gap
           << "); semi-simplicity may not hold";
        out.warnings.push_back(os.str());
    }
    return out;
}

/// Poles lambda_{k,p} = W_k(tau alpha_p) / tau of a single-delay model, for
/// every generalized eigenvalue alpha_p and every requested branch, ordered
/// by branch then eigenvalue.
inline std::vector<Complex> delay_poles(const DelayDescriptorModel& model,
                                        const std::vector<BranchIndex>& branches)
{
    if (!(model.tau > 0.0))
        throw PreconditionError("delay poles require tau > 0");
    const std::vector<Complex> alpha = generalized_eigenvalues(model);
    std::vector<Complex> poles;
    poles.reserve(alpha.size() * branches.size());
    for (BranchIndex k : branches)
        for (Complex a : alpha)
            poles.push_back(delay_pole_from_eigenvalue(a, model.tau, k));
    return poles;
}

} // namespace dloewner

#endif /* DLOEWNER_SPECTRAL_HPP */
