#ifndef DLOEWNER_LOEWNER_HPP
#define DLOEWNER_LOEWNER_HPP

#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/SVD>

#include "error.hpp"
#include "model.hpp"
#include "oracle.hpp"
#include "types.hpp"

namespace dloewner
{

/// Right datum: H(point) * direction = response.
struct RightTriple
{
    Complex point;
    ComplexVector direction; // r_i, length n_inputs
    ComplexVector response;  // w_i, length n_outputs
};

/// Left datum: direction^T * H(point) = response^T. Both row vectors are
/// stored as columns.
struct LeftTriple
{
    Complex point;
    ComplexVector direction; // l_j, length n_outputs
    ComplexVector response;  // v_j, length n_inputs
};

struct TangentialData
{
    std::vector<RightTriple> right;
    std::vector<LeftTriple> left;

    std::size_t size() const noexcept { return right.size(); }
    Index n_inputs() const { return right.empty() ? 0 : right.front().direction.size(); }
    Index n_outputs() const { return right.empty() ? 0 : right.front().response.size(); }

    void validate() const
    {
        if (right.empty())
            throw PreconditionError("tangential data is empty");
        if (right.size() != left.size())
            throw PreconditionError("right and left data must have the same count");
        const Index nu = n_inputs();
        const Index ny = n_outputs();
        for (const auto& t : right)
            if (t.direction.size() != nu || t.response.size() != ny)
                throw PreconditionError("right data vectors have inconsistent lengths");
        for (const auto& t : left)
            if (t.direction.size() != ny || t.response.size() != nu)
                throw PreconditionError("left data vectors have inconsistent lengths");
    }
};

/// Sample an oracle along the given tangential directions.
inline TangentialData sample_tangential(const SystemOracle& oracle,
                                        const std::vector<Complex>& right_points,
                                        const std::vector<ComplexVector>& right_dirs,
                                        const std::vector<Complex>& left_points,
                                        const std::vector<ComplexVector>& left_dirs)
{
    if (right_points.size() != right_dirs.size() || left_points.size() != left_dirs.size())
        throw PreconditionError("points and directions must have equal counts");
    TangentialData data;
    for (std::size_t i = 0; i < right_points.size(); ++i)
    {
        if (right_dirs[i].size() != oracle.n_inputs())
            throw PreconditionError("right direction length must equal number of inputs");
        data.right.push_back({right_points[i], right_dirs[i],
                              oracle.eval(right_points[i]) * right_dirs[i]});
    }
    for (std::size_t j = 0; j < left_points.size(); ++j)
    {
        if (left_dirs[j].size() != oracle.n_outputs())
            throw PreconditionError("left direction length must equal number of outputs");
        data.left.push_back({left_points[j], left_dirs[j],
                             (left_dirs[j].transpose() * oracle.eval(left_points[j])).transpose()});
    }
    data.validate();
    return data;
}

///
/// Loewner matrix L, shifted Loewner matrix Ls, and the stacked data:
///
///   L(i,j)  = (v_i r_j - l_i w_j) / (mu_i - lambda_j)
///   Ls(i,j) = (mu_i v_i r_j - lambda_j l_i w_j) / (mu_i - lambda_j)
///
/// V has rows v_i, W has columns w_j; R and Lt stack the directions the
/// same way. They satisfy Ls - L diag(lambda) = V R and
/// Ls - diag(mu) L = Lt W.
///
struct LoewnerPencil
{
    ComplexMatrix L;
    ComplexMatrix Ls;
    ComplexMatrix V;  // r x n_inputs
    ComplexMatrix W;  // n_outputs x r
    ComplexMatrix R;  // n_inputs x r
    ComplexMatrix Lt; // r x n_outputs
    std::vector<Complex> right_points;
    std::vector<Complex> left_points;

    /// (E, A, B, C) = (-L, -Ls, V, W).
    DelayDescriptorModel model(double tau = 0.0) const { return {-L, -Ls, V, W, tau}; }
};

inline LoewnerPencil build_loewner(const TangentialData& data)
{
    data.validate();
    const auto r   = static_cast<Index>(data.size());
    const Index nu = data.n_inputs();
    const Index ny = data.n_outputs();

    LoewnerPencil p;
    p.L.resize(r, r);
    p.Ls.resize(r, r);
    p.V.resize(r, nu);
    p.W.resize(ny, r);
    p.R.resize(nu, r);
    p.Lt.resize(r, ny);
    for (Index k = 0; k < r; ++k)
    {
        const auto& rt = data.right[static_cast<std::size_t>(k)];
        const auto& lt = data.left[static_cast<std::size_t>(k)];
        p.W.col(k)  = rt.response;
        p.R.col(k)  = rt.direction;
        p.V.row(k)  = lt.response.transpose();
        p.Lt.row(k) = lt.direction.transpose();
        p.right_points.push_back(rt.point);
        p.left_points.push_back(lt.point);
    }
    const ComplexMatrix vr = p.V * p.R;
    const ComplexMatrix lw = p.Lt * p.W;
    for (Index i = 0; i < r; ++i)
    {
        const Complex mu = p.left_points[static_cast<std::size_t>(i)];
        for (Index j = 0; j < r; ++j)
        {
            const Complex lambda = p.right_points[static_cast<std::size_t>(j)];
            if (std::abs(mu - lambda) <= 1e-14 * std::max({1.0, std::abs(mu), std::abs(lambda)}))
                throw PreconditionError(
                    "left and right interpolation points coincide; use the Hermite construction");
            const Complex d = mu - lambda;
            p.L(i, j)       = (vr(i, j) - lw(i, j)) / d;
            p.Ls(i, j)      = (mu * vr(i, j) - lambda * lw(i, j)) / d;
        }
    }
    return p;
}

struct LoewnerOptions
{
    /// When set and smaller than the data count, project the pencil onto the
    /// dominant singular subspaces of [L, Ls] and [L; Ls].
    std::optional<Index> target_order;
    /// sigma_min / sigma_max of [L, Ls] below this raises a rank warning.
    double rank_tolerance = 1e-12;
};

/// Interpolating realization plus construction diagnostics.
struct Interpolant
{
    DelayDescriptorModel model;
    double singular_ratio = 1.0;
    std::vector<std::string> warnings;
};

namespace detail
{

inline void check_rank_and_compress(Interpolant& out, const LoewnerOptions& opts)
{
    DelayDescriptorModel& m = out.model;
    const Index r = m.order();
    ComplexMatrix row_stack(r, 2 * r);
    row_stack << m.E, m.A;
    Eigen::BDCSVD<ComplexMatrix> svd_row(row_stack, Eigen::ComputeThinU);
    const auto& sv = svd_row.singularValues();
    out.singular_ratio = sv(0) > 0.0 ? sv(r - 1) / sv(0) : 0.0;

    if (opts.target_order && *opts.target_order < r)
    {
        const Index k = *opts.target_order;
        if (k < 1)
            throw PreconditionError("target order must be positive");
        ComplexMatrix col_stack(2 * r, r);
        col_stack << m.E, m.A;
        Eigen::BDCSVD<ComplexMatrix> svd_col(col_stack, Eigen::ComputeThinV);
        const ComplexMatrix Y = svd_row.matrixU().leftCols(k);
        const ComplexMatrix X = svd_col.matrixV().leftCols(k);
        m = DelayDescriptorModel(Y.adjoint() * m.E * X, Y.adjoint() * m.A * X,
                                 Y.adjoint() * m.B, m.C * X, m.tau);
        return;
    }
    if (out.singular_ratio < opts.rank_tolerance)
    {
        std::ostringstream os;
        os << "Loewner pencil is numerically rank deficient (sigma_min/sigma_max = "
           << out.singular_ratio << "); the data may come from a system of lower order";
        out.warnings.push_back(os.str());
    }
}

inline void check_distinct(const std::vector<Complex>& points)
{
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (std::abs(points[i] - points[j])
                <= 1e-14 * std::max({1.0, std::abs(points[i]), std::abs(points[j])}))
                throw PreconditionError("duplicate shifts #" + std::to_string(j) + " and #"
                                        + std::to_string(i));
}

} // namespace detail

/// Realization interpolating distinct left and right tangential data.
inline Interpolant loewner_interpolant(const TangentialData& data, const LoewnerOptions& opts = {})
{
    Interpolant out{build_loewner(data).model(0.0), 1.0, {}};
    detail::check_rank_and_compress(out, opts);
    return out;
}

///
/// Bitangential Hermite interpolant from values H_i = H(s_i) and derivatives
/// D_i = H'(s_i) at distinct points. For i != j
///
///   E(i,j) = -l_i (H_i - H_j) r_j / (s_i - s_j)
///   A(i,j) = -l_i (s_i H_i - s_j H_j) r_j / (s_i - s_j)
///
/// and on the diagonal E(i,i) = -l_i D_i r_i, A(i,i) = -l_i (H_i + s_i D_i) r_i.
/// C = [H_1 r_1, ...], B has rows l_i H_i.
///
inline Interpolant hermite_interpolant(const std::vector<Complex>& points,
                                       const std::vector<ComplexMatrix>& values,
                                       const std::vector<ComplexMatrix>& derivatives,
                                       const std::vector<ComplexVector>& right_dirs,
                                       const std::vector<ComplexVector>& left_dirs,
                                       const LoewnerOptions& opts = {})
{
    const std::size_t r = points.size();
    if (r == 0)
        throw PreconditionError("at least one shift is required");
    if (values.size() != r || derivatives.size() != r || right_dirs.size() != r
        || left_dirs.size() != r)
        throw PreconditionError("shifts, values and directions must have equal counts");
    detail::check_distinct(points);
    const Index ny = values.front().rows();
    const Index nu = values.front().cols();
    for (std::size_t i = 0; i < r; ++i)
    {
        if (right_dirs[i].size() != nu)
            throw PreconditionError("right direction length must equal number of inputs");
        if (left_dirs[i].size() != ny)
            throw PreconditionError("left direction length must equal number of outputs");
    }

    const auto n = static_cast<Index>(r);
    ComplexMatrix E(n, n), A(n, n), B(n, nu), C(ny, n);
    std::vector<ComplexVector> hr(r);         // H_i r_i
    std::vector<Eigen::RowVectorXcd> lh(r);   // l_i H_i
    for (std::size_t i = 0; i < r; ++i)
    {
        hr[i] = values[i] * right_dirs[i];
        lh[i] = left_dirs[i].transpose() * values[i];
        C.col(static_cast<Index>(i)) = hr[i];
        B.row(static_cast<Index>(i)) = lh[i];
    }
    for (std::size_t i = 0; i < r; ++i)
    {
        const auto ii = static_cast<Index>(i);
        for (std::size_t j = 0; j < r; ++j)
        {
            const auto jj = static_cast<Index>(j);
            if (i == j)
            {
                const Complex ldr = left_dirs[i].transpose() * derivatives[i] * right_dirs[i];
                const Complex lhr = lh[i] * right_dirs[i];
                E(ii, ii)         = -ldr;
                A(ii, ii)         = -(lhr + points[i] * ldr);
                continue;
            }
            // l_i H_i r_j and l_i H_j r_j
            const Complex lhi_r = lh[i] * right_dirs[j];
            const Complex l_hrj = left_dirs[i].transpose() * hr[j];
            const Complex d     = points[i] - points[j];
            E(ii, jj)           = -(lhi_r - l_hrj) / d;
            A(ii, jj)           = -(points[i] * lhi_r - points[j] * l_hrj) / d;
        }
    }
    Interpolant out{DelayDescriptorModel(E, A, B, C, 0.0), 1.0, {}};
    detail::check_rank_and_compress(out, opts);
    return out;
}

/// Hermite Loewner interpolant of an oracle at distinct shifts.
inline Interpolant build_hermite_loewner(const SystemOracle& oracle,
                                         const std::vector<Complex>& shifts,
                                         const std::vector<ComplexVector>& right_dirs,
                                         const std::vector<ComplexVector>& left_dirs,
                                         const LoewnerOptions& opts = {})
{
    detail::check_distinct(shifts);
    std::vector<ComplexMatrix> values, derivatives;
    values.reserve(shifts.size());
    derivatives.reserve(shifts.size());
    for (Complex s : shifts)
    {
        values.push_back(oracle.eval(s));
        derivatives.push_back(oracle.eval_derivative(s));
    }
    return hermite_interpolant(shifts, values, derivatives, right_dirs, left_dirs, opts);
}

///
/// Real realization of a model whose states are attached to a
/// conjugate-closed shift set. States are reordered so conjugate pairs are
/// adjacent (canonical order), then transformed by the unitary
/// block-diagonal J with blocks [1 i; 1 -i]/sqrt(2) per pair and 1 per real
/// shift: (J^H E J, J^H A J, J^H B, C J).
///
inline DelayDescriptorModel realify(const DelayDescriptorModel& model,
                                    const std::vector<Complex>& shifts)
{
    const Index n = model.order();
    if (static_cast<Index>(shifts.size()) != n)
        throw PreconditionError("one shift per state is required to realify");

    const std::vector<std::size_t> order = canonical_order(shifts);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    ComplexMatrix T = ComplexMatrix::Zero(n, n);
    for (std::size_t k = 0; k < order.size();)
    {
        const Complex s  = shifts[order[k]];
        const auto row   = static_cast<Index>(order[k]);
        const auto col   = static_cast<Index>(k);
        if (std::abs(s.imag()) <= 1e-12 * std::max(1.0, std::abs(s)))
        {
            T(row, col) = 1.0;
            ++k;
            continue;
        }
        if (k + 1 >= order.size() || !nearly_equal(shifts[order[k + 1]], std::conj(s), 1e-10))
        {
            std::ostringstream os;
            os.precision(17);
            os << "shift set is not closed under conjugation: no partner for (" << s.real()
               << ", " << s.imag() << ")";
            throw PreconditionError(os.str());
        }
        const auto row2  = static_cast<Index>(order[k + 1]);
        T(row, col)      = inv_sqrt2;
        T(row, col + 1)  = Complex(0.0, inv_sqrt2);
        T(row2, col)     = inv_sqrt2;
        T(row2, col + 1) = Complex(0.0, -inv_sqrt2);
        k += 2;
    }

    const ComplexMatrix Th = T.adjoint();
    DelayDescriptorModel out(Th * model.E * T, Th * model.A * T, Th * model.B, model.C * T,
                             model.tau);
    auto truncate = [](ComplexMatrix& m, const char* name) {
        if (m.imag().cwiseAbs().maxCoeff() > 1e-8 * m.norm())
            throw PreconditionError(std::string("realification left a complex ") + name
                                    + "; shifts or directions are not conjugate-symmetric");
        m = m.real().cast<Complex>();
    };
    truncate(out.E, "E");
    truncate(out.A, "A");
    truncate(out.B, "B");
    truncate(out.C, "C");
    return out;
}

} // namespace dloewner

#endif /* DLOEWNER_LOEWNER_HPP */
