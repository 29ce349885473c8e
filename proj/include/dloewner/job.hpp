#ifndef DLOEWNER_JOB_HPP
#define DLOEWNER_JOB_HPP

#include <chrono>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "delay_loewner.hpp"
#include "error.hpp"
#include "h2metrics.hpp"
#include "irka.hpp"
#include "loewner.hpp"
#include "model_io.hpp"
#include "oracle.hpp"
#include "shift_spec.hpp"
#include "spectral.hpp"
#include "version.hpp"

namespace dloewner
{

enum class JobMode
{
    interpolate,
    interpolate_hermite,
    reduce_tf_irka,
    reduce_dtf_irka,
    check_optimality,
    bode,
    h2_error,
    inject_delay
};

inline const char* to_string(JobMode m)
{
    switch (m)
    {
    case JobMode::interpolate: return "interpolate";
    case JobMode::interpolate_hermite: return "interpolate-hermite";
    case JobMode::reduce_tf_irka: return "reduce-tf-irka";
    case JobMode::reduce_dtf_irka: return "reduce-dtf-irka";
    case JobMode::check_optimality: return "check-optimality";
    case JobMode::bode: return "bode";
    case JobMode::h2_error: return "h2-error";
    case JobMode::inject_delay: return "inject-delay";
    }
    return "unknown";
}

enum class SourceKind
{
    none,
    matrices,
    expression,
    samples
};

/// Where a system comes from: a model directory, an expression, or a samples file.
struct ModelSource
{
    SourceKind kind = SourceKind::none;
    std::string value;

    bool empty() const { return kind == SourceKind::none; }
};

inline nlohmann::json to_json(const ModelSource& s)
{
    static const char* names[] = {"none", "matrix-files", "expression", "samples-file"};
    return {{"kind", names[static_cast<int>(s.kind)]}, {"value", s.value}};
}

struct JobSpec
{
    JobMode mode = JobMode::interpolate_hermite;
    ModelSource source;
    /// Second system: the reduced model for check-optimality, the comparison
    /// system for h2-error.
    ModelSource reference;
    int order = 0;
    double tau = 0.0;
    /// Shift list or generator (see parse_shift_spec). For reductions this is
    /// the initial shift set; empty selects log-spaced points on `band`.
    std::string shifts;
    /// Left points for tangential (non-Hermite) interpolation.
    std::string left_shifts;
    std::string omega = "logspace:0.01:100:100";
    double band_lo = 0.1;
    double band_hi = 10.0;
    std::vector<int> check_branches;
    std::optional<int> target_order;
    bool realify = true;
    IrkaOptions irka;
    QuadratureOptions quadrature;
    std::filesystem::path output;
};

struct JobResult
{
    int exit_code = 0;
    nlohmann::json report;
};

namespace detail
{

inline SystemOracle load_oracle(const ModelSource& src)
{
    switch (src.kind)
    {
    case SourceKind::matrices: return from_model(read_model(src.value));
    case SourceKind::expression: return from_expression(src.value);
    case SourceKind::samples: return read_samples(src.value);
    case SourceKind::none: break;
    }
    throw PreconditionError("no system source given (use matrices, expression or samples)");
}

inline nlohmann::json complex_list(const std::vector<Complex>& v)
{
    nlohmann::json j = nlohmann::json::array();
    for (Complex z : v)
        j.push_back(complex_to_json(z));
    return j;
}

inline nlohmann::json spec_to_json(const JobSpec& spec)
{
    nlohmann::json j;
    j["mode"]      = to_string(spec.mode);
    j["source"]    = to_json(spec.source);
    j["reference"] = to_json(spec.reference);
    j["order"]     = spec.order;
    j["tau"]       = spec.tau;
    j["shifts"]    = spec.shifts;
    j["left_shifts"] = spec.left_shifts;
    j["omega"]     = spec.omega;
    j["band"]      = {spec.band_lo, spec.band_hi};
    j["check_branches"] = spec.check_branches;
    j["target_order"]   = spec.target_order ? nlohmann::json(*spec.target_order) : nlohmann::json();
    j["realify"]   = spec.realify;
    j["irka"]      = {{"max_iter", spec.irka.max_iter},      {"conv_tol", spec.irka.conv_tol},
                      {"opt_tol", spec.irka.opt_tol},        {"branch", spec.irka.branch},
                      {"seed", spec.irka.seed},              {"stagnation_window", spec.irka.stagnation_window}};
    j["quadrature"] = {{"omega_max", spec.quadrature.omega_max},
                       {"omega_first", spec.quadrature.omega_first},
                       {"rel_tol", spec.quadrature.rel_tol},
                       {"max_panels", spec.quadrature.max_panels},
                       {"tail_tolerance", spec.quadrature.tail_tolerance}};
    j["output"] = spec.output.string();
    return j;
}

inline nlohmann::json residuals_to_json(const OptimalityReport& rep)
{
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rep.residuals)
        arr.push_back({{"branch", r.branch},
                       {"index", r.index},
                       {"eigenvalue", complex_to_json(r.eigenvalue)},
                       {"pole", complex_to_json(r.pole)},
                       {"right", r.right},
                       {"left", r.left},
                       {"derivative", r.derivative}});
    return {{"max", rep.max_residual()}, {"entries", arr}};
}

inline double rel(double num, double den) { return den > 0.0 ? num / den : num; }

// Value, left and bitangential derivative residuals of a Hermite interpolant.
inline nlohmann::json hermite_residuals(const SystemOracle& oracle, const DelayDescriptorModel& m,
                                        const std::vector<Complex>& shifts,
                                        const std::vector<ComplexVector>& rdirs,
                                        const std::vector<ComplexVector>& ldirs)
{
    nlohmann::json arr = nlohmann::json::array();
    double worst = 0.0;
    for (std::size_t k = 0; k < shifts.size(); ++k)
    {
        const ComplexMatrix h = oracle.eval(shifts[k]), hr = m.transfer(shifts[k]);
        const ComplexMatrix d = oracle.eval_derivative(shifts[k]), dr = m.transfer_derivative(shifts[k]);
        const double right = rel((h * rdirs[k] - hr * rdirs[k]).norm(), (h * rdirs[k]).norm());
        const double left  = rel((ldirs[k].transpose() * (h - hr)).norm(),
                                 (ldirs[k].transpose() * h).norm());
        const Complex full = ldirs[k].transpose() * d * rdirs[k];
        const Complex red  = ldirs[k].transpose() * dr * rdirs[k];
        const double deriv = rel(std::abs(full - red), std::abs(full));
        worst = std::max({worst, right, left, deriv});
        arr.push_back({{"shift", complex_to_json(shifts[k])},
                       {"right", right},
                       {"left", left},
                       {"derivative", deriv}});
    }
    return {{"max", worst}, {"entries", arr}};
}

inline nlohmann::json tangential_residuals(const TangentialData& data, const DelayDescriptorModel& m)
{
    nlohmann::json arr = nlohmann::json::array();
    double worst = 0.0;
    for (const auto& t : data.right)
    {
        const double r = rel((m.transfer(t.point) * t.direction - t.response).norm(), t.response.norm());
        worst = std::max(worst, r);
        arr.push_back({{"side", "right"}, {"point", complex_to_json(t.point)}, {"residual", r}});
    }
    for (const auto& t : data.left)
    {
        const double r = rel((t.direction.transpose() * m.transfer(t.point) - t.response.transpose()).norm(),
                             t.response.norm());
        worst = std::max(worst, r);
        arr.push_back({{"side", "left"}, {"point", complex_to_json(t.point)}, {"residual", r}});
    }
    return {{"max", worst}, {"entries", arr}};
}

inline void write_report(const std::filesystem::path& dir, const nlohmann::json& report)
{
    if (dir.empty())
        return;
    std::filesystem::create_directories(dir);
    std::ofstream out(dir / "report.json");
    out << report.dump(2) << '\n';
}

inline LoewnerOptions loewner_options(const JobSpec& spec)
{
    LoewnerOptions o;
    if (spec.target_order)
        o.target_order = *spec.target_order;
    return o;
}

inline void run_interpolation(const JobSpec& spec, nlohmann::json& rep)
{
    const SystemOracle oracle = load_oracle(spec.source);
    const std::vector<Complex> shifts = parse_shift_spec(spec.shifts, spec.irka.seed);
    if (shifts.empty() || spec.shifts.empty())
        throw PreconditionError("interpolation needs --shifts");
    const std::vector<ComplexVector> rdirs(shifts.size(), ComplexVector::Ones(oracle.n_inputs()));
    const std::vector<ComplexVector> ldirs(shifts.size(), ComplexVector::Ones(oracle.n_outputs()));
    const LoewnerOptions lopts = loewner_options(spec);

    Interpolant built;
    nlohmann::json residuals;
    if (spec.mode == JobMode::interpolate_hermite)
    {
        built = spec.tau > 0.0 ? build_hermite_delay_loewner(oracle, shifts, rdirs, ldirs, spec.tau, lopts)
                               : build_hermite_loewner(oracle, shifts, rdirs, ldirs, lopts);
        if (!spec.target_order || *spec.target_order >= static_cast<int>(shifts.size()))
        {
            if (spec.realify)
            {
                try
                {
                    built.model = realify(built.model, shifts);
                }
                catch (const PreconditionError& e)
                {
                    built.warnings.emplace_back(std::string("model left complex: ") + e.what());
                }
            }
            residuals = hermite_residuals(oracle, built.model, shifts, rdirs, ldirs);
        }
    }
    else
    {
        const std::vector<Complex> left = parse_shift_spec(spec.left_shifts, spec.irka.seed + 1);
        if (spec.left_shifts.empty() || left.size() != shifts.size())
            throw PreconditionError("tangential interpolation needs --left-shifts with as many "
                                    "points as --shifts");
        const std::vector<ComplexVector> l(left.size(), ComplexVector::Ones(oracle.n_outputs()));
        const TangentialData data = sample_tangential(oracle, shifts, rdirs, left, l);
        built = spec.tau > 0.0 ? build_delay_loewner(data, spec.tau, lopts) : loewner_interpolant(data, lopts);
        if (!spec.target_order)
            residuals = tangential_residuals(data, built.model);
        rep["left_shifts"] = complex_list(left);
    }
    rep["shifts"]         = complex_list(shifts);
    rep["order"]          = built.model.order();
    rep["tau"]            = built.model.tau;
    rep["singular_ratio"] = built.singular_ratio;
    rep["warnings"]       = built.warnings;
    rep["residuals"]      = residuals;
    if (!spec.output.empty())
        write_model(spec.output / "model", built.model,
                    {{"mode", to_string(spec.mode)}, {"shifts", complex_list(shifts)},
                     {"residuals", residuals}});
}

inline void run_reduction(const JobSpec& spec, nlohmann::json& rep)
{
    const SystemOracle oracle = load_oracle(spec.source);
    if (spec.order < 1)
        throw PreconditionError("reduction needs --order >= 1");
    const bool delay = spec.mode == JobMode::reduce_dtf_irka;
    if (delay && !(spec.tau > 0.0))
        throw PreconditionError("dTF-IRKA needs --tau > 0");

    IrkaState init;
    if (spec.shifts.empty())
        init = default_initial_state(oracle, spec.order, spec.band_lo, spec.band_hi);
    else
    {
        init = default_initial_state(oracle, spec.order, spec.band_lo, spec.band_hi);
        init.shifts = parse_shift_spec(spec.shifts, spec.irka.seed);
        if (static_cast<int>(init.shifts.size()) != spec.order)
            throw PreconditionError("--shifts must provide exactly --order initial points");
    }
    IrkaOptions opts    = spec.irka;
    opts.realify_result = spec.realify;
    const IrkaReport r = delay ? dtf_irka(oracle, spec.order, spec.tau, init, opts)
                               : tf_irka(oracle, spec.order, init, opts);

    nlohmann::json history = nlohmann::json::array();
    for (const auto& s : r.final_state.shift_history)
        history.push_back(complex_list(s));
    rep["initial_shifts"] = complex_list(init.shifts);
    rep["final_shifts"]   = complex_list(r.final_state.shifts);
    rep["converged"]      = r.converged;
    rep["iterations"]     = r.iterations;
    rep["final_metric"]   = r.final_metric;
    rep["metric_history"] = r.metric_history;
    rep["shift_history"]  = history;
    rep["stagnated"]      = r.stagnated;
    rep["diagnostic"]     = r.diagnostic;
    rep["warnings"]       = r.warnings;
    rep["residuals"]      = residuals_to_json(r.optimality);
    if (!spec.output.empty())
        write_model(spec.output / "model", r.final_model,
                    {{"mode", to_string(spec.mode)},
                     {"shifts", complex_list(r.final_state.shifts)},
                     {"iterations", r.iterations},
                     {"converged", r.converged},
                     {"residuals", residuals_to_json(r.optimality)}});
}

inline void run_check(const JobSpec& spec, nlohmann::json& rep)
{
    const SystemOracle oracle = load_oracle(spec.source);
    if (spec.reference.kind != SourceKind::matrices)
        throw PreconditionError("check needs the reduced model as a model directory (--model)");
    const DelayDescriptorModel model = read_model(spec.reference.value);
    const std::vector<int> branches =
        spec.check_branches.empty() ? std::vector<int>{spec.irka.branch} : spec.check_branches;
    const OptimalityReport opt = check_delay_optimality(oracle, model, branches);
    rep["branches"]  = branches;
    rep["residuals"] = residuals_to_json(opt);
    rep["tolerance"] = spec.irka.opt_tol;
    rep["satisfied"] = opt.max_residual() <= spec.irka.opt_tol;
}

inline void run_bode(const JobSpec& spec, nlohmann::json& rep)
{
    const SystemOracle oracle = load_oracle(spec.source);
    std::vector<double> grid;
    for (Complex w : parse_shift_spec(spec.omega, spec.irka.seed))
        grid.push_back(w.real());
    const FrequencyResponse resp = frequency_response(oracle, grid);
    std::size_t failed = 0;
    for (const auto& row : resp.rows)
        failed += row.ok() ? 0 : 1;
    rep["points"]        = grid.size();
    rep["failed_points"] = failed;
    if (!spec.output.empty())
    {
        std::filesystem::create_directories(spec.output);
        std::ofstream out(spec.output / "response.csv");
        write_response_csv(out, resp);
        rep["response"] = (spec.output / "response.csv").string();
    }
}

inline void run_h2(const JobSpec& spec, nlohmann::json& rep)
{
    const SystemOracle a = load_oracle(spec.source);
    const SystemOracle b = load_oracle(spec.reference);
    const H2Estimate e   = h2_error_estimate(a, b, spec.quadrature);
    rep["h2_error"]       = e.value;
    rep["abs_error"]      = e.abs_error;
    rep["tail"]           = e.tail;
}

inline void run_inject(const JobSpec& spec, nlohmann::json& rep)
{
    if (spec.source.kind != SourceKind::matrices)
        throw PreconditionError("inject-delay needs a model directory (--matrices)");
    if (spec.output.empty())
        throw PreconditionError("inject-delay needs --out");
    const DelayDescriptorModel m = inject_delay(read_model(spec.source.value), spec.tau);
    write_model(spec.output / "model", m, {{"mode", "inject-delay"}, {"source", spec.source.value}});
    rep["tau"]   = m.tau;
    rep["order"] = m.order();
}

} // namespace detail

///
/// Execute one job. Exit codes: 0 success (a non-converged reduction still
/// succeeds, with "converged": false), 1 invalid input, 2 numerical
/// failure. A report.json is written to the output directory in every case.
///
inline JobResult run(const JobSpec& spec)
{
    const auto start = std::chrono::steady_clock::now();
    JobResult result;
    nlohmann::json& rep = result.report;
    rep["tool"]    = "dloewner";
    rep["version"] = version;
    rep["options"] = detail::spec_to_json(spec);
    try
    {
        switch (spec.mode)
        {
        case JobMode::interpolate:
        case JobMode::interpolate_hermite: detail::run_interpolation(spec, rep); break;
        case JobMode::reduce_tf_irka:
        case JobMode::reduce_dtf_irka: detail::run_reduction(spec, rep); break;
        case JobMode::check_optimality: detail::run_check(spec, rep); break;
        case JobMode::bode: detail::run_bode(spec, rep); break;
        case JobMode::h2_error: detail::run_h2(spec, rep); break;
        case JobMode::inject_delay: detail::run_inject(spec, rep); break;
        }
        rep["status"] = "ok";
    }
    catch (const PreconditionError& e)
    {
        result.exit_code = 1;
        rep["status"]    = "invalid-input";
        rep["error"]     = e.what();
    }
    catch (const ParseError& e)
    {
        result.exit_code = 1;
        rep["status"]    = "invalid-input";
        rep["error"]     = e.what();
    }
    catch (const LookupError& e)
    {
        result.exit_code = 1;
        rep["status"]    = "invalid-input";
        rep["error"]     = e.what();
    }
    catch (const std::exception& e)
    {
        result.exit_code = 2;
        rep["status"]    = "numerical-failure";
        rep["error"]     = e.what();
    }
    if (!rep.contains("residuals"))
        rep["residuals"] = nullptr;
    rep["wall_time_s"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    try
    {
        detail::write_report(spec.output, rep);
    }
    catch (const std::exception& e)
    {
        rep["report_write_error"] = e.what();
        if (result.exit_code == 0)
            result.exit_code = 1;
    }
    return result;
}

} // namespace dloewner

#endif /* DLOEWNER_JOB_HPP */
