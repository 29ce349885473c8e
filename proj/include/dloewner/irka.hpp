#ifndef DLOEWNER_IRKA_HPP
#define DLOEWNER_IRKA_HPP

#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "delay_loewner.hpp"
#include "error.hpp"
#include "lambertw.hpp"
#include "loewner.hpp"
#include "oracle.hpp"
#include "spectral.hpp"
#include "types.hpp"

namespace dloewner
{

struct IrkaOptions
{
    int max_iter     = 100;
    double conv_tol  = 1e-6;
    double opt_tol   = 1e-6;
    /// Lambert W branch used to map reduced eigenvalues to poles (delay case).
    int branch = 0;
    /// Seed for randomized initializations (random_initial_state).
    std::uint64_t seed = 0;
    /// Abort when the shift movement grows monotonically over this many iterations.
    int stagnation_window = 10;
    /// Return a real realization when the final shift set allows it.
    bool realify_result = true;
};

///
/// Interpolation data of one fixed-point iterate. b_dirs are right
/// directions (length n_inputs), c_dirs left directions (length n_outputs).
///
struct IrkaState
{
    std::vector<Complex> shifts;
    std::vector<ComplexVector> b_dirs;
    std::vector<ComplexVector> c_dirs;
    int iteration = 0;
    std::vector<std::vector<Complex>> shift_history;
    double convergence_metric = std::numeric_limits<double>::infinity();
};

/// Relative residuals of the first-order optimality conditions at -lambda
/// for one reduced pole: right H b, left c^T H and bitangential c^T H' b.
struct OptimalityResidual
{
    int branch = 0;
    std::size_t index = 0; // which reduced eigenvalue
    Complex eigenvalue;    // alpha_p of (A, E)
    Complex pole;          // lambda_{k,p}
    double right = 0.0;
    double left = 0.0;
    double derivative = 0.0;

    double max() const { return std::max({right, left, derivative}); }
};

struct OptimalityReport
{
    std::vector<OptimalityResidual> residuals;

    double max_residual() const
    {
        double m = 0.0;
        for (const auto& r : residuals)
            m = std::max(m, r.max());
        return m;
    }
};

struct IrkaReport
{
    DelayDescriptorModel final_model;
    bool converged = false;
    int iterations = 0;
    double final_metric = std::numeric_limits<double>::infinity();
    OptimalityReport optimality;
    IrkaState final_state;
    std::vector<double> metric_history;
    bool stagnated = false;
    /// Why the iteration stopped early, empty otherwise.
    std::string diagnostic;
    std::vector<std::string> warnings;
};

/// r real shifts log-spaced on [lo, hi], all-ones directions.
inline IrkaState default_initial_state(const SystemOracle& oracle, int r, double lo = 0.1,
                                       double hi = 10.0)
{
    if (r < 1)
        throw PreconditionError("reduction order must be at least 1");
    if (!(lo > 0.0) || !(hi >= lo))
        throw PreconditionError("initial band must satisfy 0 < lo <= hi");
    IrkaState s;
    for (double p : logspace(lo, hi, r))
    {
        s.shifts.emplace_back(p, 0.0);
        s.b_dirs.push_back(ComplexVector::Ones(oracle.n_inputs()));
        s.c_dirs.push_back(ComplexVector::Ones(oracle.n_outputs()));
    }
    return s;
}

/// r real shifts drawn log-uniformly from [lo, hi], seeded; random unit directions.
inline IrkaState random_initial_state(const SystemOracle& oracle, int r, double lo, double hi,
                                      std::uint64_t seed)
{
    IrkaState s = default_initial_state(oracle, r, lo, hi);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> expo(std::log(lo), std::log(hi));
    std::normal_distribution<double> gauss;
    for (int i = 0; i < r; ++i)
    {
        s.shifts[static_cast<std::size_t>(i)] = Complex(std::exp(expo(rng)), 0.0);
        for (Index k = 0; k < oracle.n_inputs(); ++k)
            s.b_dirs[static_cast<std::size_t>(i)](k) = gauss(rng);
        for (Index k = 0; k < oracle.n_outputs(); ++k)
            s.c_dirs[static_cast<std::size_t>(i)](k) = gauss(rng);
    }
    return s;
}

namespace detail
{

struct ShiftItem
{
    Complex shift;
    ComplexVector b;
    ComplexVector c;
};

inline bool is_real_shift(Complex s) { return std::abs(s.imag()) <= 1e-8 * std::max(1.0, std::abs(s)); }

// Scale so that |b| = |c| and the largest entry of c is real positive;
// the product c b^T is unchanged.
inline void normalize_directions(ComplexVector& b, ComplexVector& c)
{
    const double nb = b.norm(), nc = c.norm();
    if (nb > 0.0 && nc > 0.0)
    {
        const double t = std::sqrt(nc / nb);
        b *= t;
        c /= t;
    }
    Index m = 0;
    c.cwiseAbs().maxCoeff(&m);
    if (c.size() > 0 && std::abs(c(m)) > 0.0)
    {
        const Complex phase = c(m) / std::abs(c(m));
        c /= phase;
        b *= phase;
    }
}

} // namespace detail

///
/// Project a candidate iterate onto a conjugate-closed one of size r.
///
/// Near-real shifts become real with real directions. Conjugate pairs are
/// rebuilt from their upper member. A lone complex shift is completed with
/// its conjugate, and to keep the count at r the real shifts of smallest
/// magnitude are dropped. The result is in canonical order.
///
inline IrkaState conjugate_closure(const IrkaState& candidate, std::size_t r)
{
    using detail::ShiftItem;
    const std::size_t n = candidate.shifts.size();
    if (candidate.b_dirs.size() != n || candidate.c_dirs.size() != n)
        throw PreconditionError("shift and direction counts differ");

    std::vector<ShiftItem> reals, uppers, lowers;
    for (std::size_t i = 0; i < n; ++i)
    {
        ShiftItem it{candidate.shifts[i], candidate.b_dirs[i], candidate.c_dirs[i]};
        if (detail::is_real_shift(it.shift))
        {
            it.shift = Complex(it.shift.real(), 0.0);
            it.b     = it.b.real().cast<Complex>();
            it.c     = it.c.real().cast<Complex>();
            reals.push_back(std::move(it));
        }
        else if (it.shift.imag() > 0.0)
            uppers.push_back(std::move(it));
        else
            lowers.push_back(std::move(it));
    }

    // Pair uppers with conjugate lowers; whatever is left over is lone.
    std::vector<ShiftItem> pairs; // upper representatives
    std::vector<bool> used(lowers.size(), false);
    for (auto& u : uppers)
    {
        for (std::size_t j = 0; j < lowers.size(); ++j)
            if (!used[j] && nearly_equal(lowers[j].shift, std::conj(u.shift), 1e-6))
            {
                used[j] = true;
                break;
            }
        pairs.push_back(u);
    }
    for (std::size_t j = 0; j < lowers.size(); ++j)
        if (!used[j])
            pairs.push_back({std::conj(lowers[j].shift), lowers[j].b.conjugate(),
                             lowers[j].c.conjugate()});

    auto by_magnitude = [](const ShiftItem& a, const ShiftItem& b) {
        return std::abs(a.shift) < std::abs(b.shift);
    };
    std::sort(reals.begin(), reals.end(), by_magnitude);
    std::sort(pairs.begin(), pairs.end(), by_magnitude);

    std::size_t count = reals.size() + 2 * pairs.size();
    std::size_t drop_real = 0;
    while (count > r && drop_real < reals.size())
    {
        ++drop_real;
        --count;
    }
    std::size_t drop_pair = 0;
    while (count > r && drop_pair < pairs.size())
    {
        ++drop_pair;
        count -= 2;
    }
    std::vector<ShiftItem> items(reals.begin() + static_cast<std::ptrdiff_t>(drop_real), reals.end());
    if (count < r && drop_pair > 0)
    {
        // Dropping a pair overshot by one: keep a real shift in its place.
        const ShiftItem& d = pairs[drop_pair - 1];
        items.push_back({Complex(std::abs(d.shift), 0.0), d.b.real().cast<Complex>(),
                         d.c.real().cast<Complex>()});
        ++count;
    }
    for (std::size_t p = drop_pair; p < pairs.size(); ++p)
    {
        const ShiftItem& u = pairs[p];
        items.push_back(u);
        items.push_back({std::conj(u.shift), u.b.conjugate(), u.c.conjugate()});
    }
    if (items.size() != r)
        throw PreconditionError("conjugate closure could not preserve the reduction order");

    std::vector<Complex> pts;
    for (const auto& it : items)
        pts.push_back(it.shift);
    IrkaState out;
    out.iteration          = candidate.iteration;
    out.shift_history      = candidate.shift_history;
    out.convergence_metric = candidate.convergence_metric;
    for (std::size_t idx : canonical_order(pts))
    {
        out.shifts.push_back(items[idx].shift);
        out.b_dirs.push_back(items[idx].b);
        out.c_dirs.push_back(items[idx].c);
    }
    return out;
}

/// max_i |new_i - old_i| / max_i |old_i|, both in canonical order.
inline double shift_movement(const std::vector<Complex>& old_shifts,
                             const std::vector<Complex>& new_shifts)
{
    if (old_shifts.size() != new_shifts.size())
        return std::numeric_limits<double>::infinity();
    auto sorted = [](std::vector<Complex> v) {
        std::sort(v.begin(), v.end(), canonical_less);
        return v;
    };
    const auto a = sorted(old_shifts);
    const auto b = sorted(new_shifts);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        num = std::max(num, std::abs(b[i] - a[i]));
        den = std::max(den, std::abs(a[i]));
    }
    return den > 0.0 ? num / den : num;
}

///
/// Residuals of the first-order H2 optimality conditions of a reduced
/// model. For each generalized eigenvalue alpha_p with residue directions
/// (b_p, c_p) and each branch k, the mirror point is -lambda_{k,p} where
/// lambda_{k,p} = W_k(tau alpha_p) / tau (lambda = alpha when tau = 0, and
/// the branch list is then ignored). Reported values are relative:
///
///   right      |H b - Hr b| / |H b|
///   left       |c^T H - c^T Hr| / |c^T H|
///   derivative |c^T (H' - Hr') b| / |c^T H' b|
///
inline OptimalityReport check_delay_optimality(const SystemOracle& oracle,
                                               const DelayDescriptorModel& model,
                                               const std::vector<int>& branches = {0})
{
    const SpectralDecomposition dec = decompose(model);
    const double tau = model.tau;
    const std::vector<int> ks = tau > 0.0 ? branches : std::vector<int>{0};
    auto rel = [](double num, double den) { return den > 0.0 ? num / den : num; };

    OptimalityReport report;
    for (int k : ks)
        for (std::size_t p = 0; p < dec.eigenvalues.size(); ++p)
        {
            const Complex alpha = dec.eigenvalues[p];
            const Complex pole =
                tau > 0.0 ? delay_pole_from_eigenvalue(alpha, tau, BranchIndex{k}) : alpha;
            const Complex pt         = -pole;
            const ComplexMatrix h    = oracle.eval(pt);
            const ComplexMatrix hr   = model.transfer(pt);
            const ComplexMatrix dh   = oracle.eval_derivative(pt);
            const ComplexMatrix dhr  = model.transfer_derivative(pt);
            const ComplexVector& b   = dec.b_dirs[p];
            const ComplexVector& c   = dec.c_dirs[p];

            OptimalityResidual res;
            res.branch     = k;
            res.index      = p;
            res.eigenvalue = alpha;
            res.pole       = pole;
            res.right      = rel((h * b - hr * b).norm(), (h * b).norm());
            res.left       = rel((c.transpose() * (h - hr)).norm(), (c.transpose() * h).norm());
            const Complex full = c.transpose() * dh * b;
            const Complex red  = c.transpose() * dhr * b;
            res.derivative     = rel(std::abs(full - red), std::abs(full));
            report.residuals.push_back(res);
        }
    return report;
}

namespace detail
{

inline void validate_state(const SystemOracle& oracle, int r, const IrkaState& s)
{
    if (r < 1)
        throw PreconditionError("reduction order must be at least 1");
    const auto n = static_cast<std::size_t>(r);
    if (s.shifts.size() != n || s.b_dirs.size() != n || s.c_dirs.size() != n)
        throw PreconditionError("initial state must hold r shifts and r direction pairs");
    for (std::size_t i = 0; i < n; ++i)
    {
        if (s.b_dirs[i].size() != oracle.n_inputs())
            throw PreconditionError("right directions must have n_inputs entries");
        if (s.c_dirs[i].size() != oracle.n_outputs())
            throw PreconditionError("left directions must have n_outputs entries");
    }
}

inline Interpolant build_iterate(const SystemOracle& oracle, const IrkaState& s, double tau)
{
    if (tau > 0.0)
        return build_hermite_delay_loewner(oracle, s.shifts, s.b_dirs, s.c_dirs, tau);
    return build_hermite_loewner(oracle, s.shifts, s.b_dirs, s.c_dirs);
}

// Next iterate from the reduced model: mirrored (Lambert-mapped) poles and
// residue directions.
inline IrkaState next_iterate(const SpectralDecomposition& dec, double tau, int branch)
{
    IrkaState next;
    for (std::size_t i = 0; i < dec.eigenvalues.size(); ++i)
    {
        Complex pole = tau > 0.0
                           ? delay_pole_from_eigenvalue(dec.eigenvalues[i], tau, BranchIndex{branch})
                           : dec.eigenvalues[i];
        if (pole.real() > 0.0)
            pole = Complex(-pole.real(), pole.imag());
        ComplexVector b = dec.b_dirs[i];
        ComplexVector c = dec.c_dirs[i];
        normalize_directions(b, c);
        next.shifts.push_back(-pole);
        next.b_dirs.push_back(std::move(b));
        next.c_dirs.push_back(std::move(c));
    }
    return next;
}

inline IrkaReport irka_loop(const SystemOracle& oracle, int r, double tau, const IrkaState& init,
                            const IrkaOptions& opts)
{
    validate_state(oracle, r, init);
    if (opts.max_iter < 1)
        throw PreconditionError("max_iter must be positive");
    const auto rr = static_cast<std::size_t>(r);

    IrkaState state = conjugate_closure(init, rr);
    state.iteration = 0;
    state.shift_history.assign(1, state.shifts);
    if (tau > 0.0)
        detail::require_injective(state.shifts, tau);

    IrkaReport report;
    std::optional<DelayDescriptorModel> best_model;
    IrkaState best_state = state;
    double best_metric   = std::numeric_limits<double>::infinity();
    int rising           = 0;
    std::vector<std::string> spectral_warnings;

    for (int it = 1; it <= opts.max_iter; ++it)
    {
        Interpolant built;
        SpectralDecomposition dec;
        try
        {
            built = build_iterate(oracle, state, tau);
            dec   = decompose(built.model);
            spectral_warnings = dec.warnings;
        }
        catch (const InjectivityError& e)
        {
            report.diagnostic = "iteration " + std::to_string(it) + ": " + e.what();
            break;
        }
        catch (const SpectralError& e)
        {
            report.diagnostic = "iteration " + std::to_string(it) + ": " + e.what();
            break;
        }

        IrkaState next = conjugate_closure(next_iterate(dec, tau, opts.branch), rr);
        const double metric = shift_movement(state.shifts, next.shifts);
        report.metric_history.push_back(metric);
        next.iteration          = it;
        next.convergence_metric = metric;
        next.shift_history      = std::move(state.shift_history);
        next.shift_history.push_back(next.shifts);
        report.iterations = it;

        if (metric < best_metric || !best_model)
        {
            best_metric = metric;
            best_model  = built.model;
            best_state  = state;
            best_state.convergence_metric = metric;
            best_state.iteration          = it;
            best_state.shift_history      = next.shift_history;
        }
        state = std::move(next);

        if (metric < opts.conv_tol)
        {
            // Fixed point reached in the shifts; accept once the optimality
            // conditions of the rebuilt model hold as well.
            try
            {
                Interpolant final_build = build_iterate(oracle, state, tau);
                OptimalityReport opt =
                    check_delay_optimality(oracle, final_build.model, {opts.branch});
                if (opt.max_residual() <= opts.opt_tol)
                {
                    report.converged    = true;
                    report.final_model  = final_build.model;
                    report.optimality   = std::move(opt);
                    report.final_metric = metric;
                    report.final_state  = state;
                    report.warnings     = final_build.warnings;
                    break;
                }
            }
            catch (const InjectivityError& e)
            {
                report.diagnostic = "iteration " + std::to_string(it) + ": " + e.what();
                break;
            }
            catch (const SpectralError& e)
            {
                report.diagnostic = "iteration " + std::to_string(it) + ": " + e.what();
                break;
            }
        }

        const auto& h = report.metric_history;
        const auto w  = static_cast<std::size_t>(std::max(1, opts.stagnation_window));
        rising        = (h.size() >= 2 && h.back() >= h[h.size() - 2]) ? rising + 1 : 0;
        if (static_cast<std::size_t>(rising) >= w)
        {
            report.stagnated  = true;
            report.diagnostic = "shift movement did not decrease for "
                                + std::to_string(w) + " consecutive iterations";
            break;
        }
    }

    if (!report.converged)
    {
        if (report.diagnostic.empty())
            report.diagnostic = "no convergence within " + std::to_string(opts.max_iter)
                                + " iterations";
        if (!best_model)
            throw Error("reduction failed before the first iterate: " + report.diagnostic);
        report.final_model  = *best_model;
        report.final_metric = best_metric;
        report.final_state  = best_state;
        try
        {
            report.optimality = check_delay_optimality(oracle, report.final_model, {opts.branch});
        }
        catch (const Error& e)
        {
            report.warnings.emplace_back(std::string("optimality check failed: ") + e.what());
        }
    }

    report.warnings.insert(report.warnings.end(), spectral_warnings.begin(), spectral_warnings.end());

    if (opts.realify_result)
    {
        try
        {
            report.final_model = realify(report.final_model, report.final_state.shifts);
        }
        catch (const PreconditionError& e)
        {
            report.warnings.emplace_back(std::string("result left complex: ") + e.what());
        }
    }
    return report;
}

} // namespace detail

/// Delay-free TF-IRKA: fixed point sigma_i = -lambda_i with residue directions.
inline IrkaReport tf_irka(const SystemOracle& oracle, int r, const IrkaState& init,
                          const IrkaOptions& opts = {})
{
    return detail::irka_loop(oracle, r, 0.0, init, opts);
}

///
/// Delay TF-IRKA. Each sweep builds the single-delay Hermite interpolant at
/// the current shifts and directions, decomposes its pencil, and moves the
/// shifts to sigma_i = -W_k(tau lambda_i) / tau on the configured branch with
/// b_i = (y_i^* B)^T, c_i = C x_i, followed by conjugate closure.
///
inline IrkaReport dtf_irka(const SystemOracle& oracle, int r, double tau, const IrkaState& init,
                           const IrkaOptions& opts = {})
{
    if (!(tau > 0.0))
        throw PreconditionError("dTF-IRKA requires tau > 0; use tf_irka for the delay-free case");
    return detail::irka_loop(oracle, r, tau, init, opts);
}

} // namespace dloewner

#endif /* DLOEWNER_IRKA_HPP */
