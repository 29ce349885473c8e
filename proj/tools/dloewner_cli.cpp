// Command-line front end: one job per invocation.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <unistd.h>

#include <CLI11.hpp>

#include <dloewner/job.hpp>

namespace
{

bool use_color()
{
    const char* no_color = std::getenv("NO_COLOR");
    if (no_color && *no_color)
        return false;
    return isatty(fileno(stderr));
}

void log_line(const char* level, const char* color, const std::string& msg)
{
    if (use_color())
        std::cerr << color << level << "\033[0m " << msg << '\n';
    else
        std::cerr << level << ' ' << msg << '\n';
}

void info(const std::string& msg) { log_line("[info]", "\033[36m", msg); }
void warn(const std::string& msg) { log_line("[warn]", "\033[33m", msg); }
void fail(const std::string& msg) { log_line("[error]", "\033[31m", msg); }

struct SourceFlags
{
    std::string expr, matrices, samples;

    void add(CLI::App* app)
    {
        app->add_option("--expr", expr, "transfer expression in s, e.g. \"1/(s+exp(-s))\"");
        app->add_option("--matrices", matrices, "model directory with E/A/B/C.mtx and model.json");
        app->add_option("--samples", samples, "JSON samples file {points, values, derivatives}");
    }

    dloewner::ModelSource source() const
    {
        using dloewner::SourceKind;
        const int given = !expr.empty() + !matrices.empty() + !samples.empty();
        if (given > 1)
            throw dloewner::PreconditionError("give only one of --expr, --matrices, --samples");
        if (!expr.empty())
            return {SourceKind::expression, expr};
        if (!matrices.empty())
            return {SourceKind::matrices, matrices};
        if (!samples.empty())
            return {SourceKind::samples, samples};
        return {};
    }
};

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Delay Loewner interpolation and dTF-IRKA reduction"};
    app.set_version_flag("--version", std::string(dloewner::version));
    app.require_subcommand(1);

    dloewner::JobSpec spec;
    SourceFlags src;
    std::string out, method = "dtf", ref_matrices, ref_expr, model_dir;
    bool tangential = false, complex_model = false;
    std::string omega;

    auto common = [&](CLI::App* sub) {
        src.add(sub);
        sub->add_option("--out", out, "output directory (report.json and artifacts)");
        sub->add_option("--seed", spec.irka.seed, "seed for random shift generators");
    };

    auto* interp = app.add_subcommand("interpolate", "build a (delay) Loewner interpolant");
    common(interp);
    interp->add_option("--tau", spec.tau, "delay; 0 gives a delay-free model")->check(CLI::NonNegativeNumber);
    interp->add_option("--shifts", spec.shifts, "list \"0.1,1\" or logspace:a:b:n / linspace / random")
        ->required();
    interp->add_option("--left-shifts", spec.left_shifts, "left points (tangential mode)");
    interp->add_flag("--tangential", tangential, "two-sided tangential data instead of Hermite");
    interp->add_option("--target-order", spec.target_order, "compress to this order by SVD projection");
    interp->add_flag("--complex", complex_model, "skip the real-arithmetic transformation");

    auto* reduce = app.add_subcommand("reduce", "H2 reduction by (d)TF-IRKA");
    common(reduce);
    reduce->add_option("--order", spec.order, "reduced order r")->required()->check(CLI::PositiveNumber);
    reduce->add_option("--tau", spec.tau, "delay of the reduced model")->check(CLI::NonNegativeNumber);
    reduce->add_option("--method", method, "dtf or tf")->check(CLI::IsMember({"dtf", "tf"}));
    reduce->add_option("--shifts", spec.shifts, "initial shifts (exactly --order points)");
    reduce->add_option("--band-lo", spec.band_lo, "default initial shifts: lower end");
    reduce->add_option("--band-hi", spec.band_hi, "default initial shifts: upper end");
    reduce->add_option("--branch", spec.irka.branch, "Lambert W branch for the shift update");
    reduce->add_option("--max-iter", spec.irka.max_iter, "iteration cap")->check(CLI::PositiveNumber);
    reduce->add_option("--tol", spec.irka.conv_tol, "relative shift movement tolerance");
    reduce->add_option("--opt-tol", spec.irka.opt_tol, "optimality residual tolerance");
    reduce->add_flag("--complex", complex_model, "skip the real-arithmetic transformation");

    auto* check = app.add_subcommand("check", "verify interpolatory H2 optimality conditions");
    common(check);
    check->add_option("--model", model_dir, "reduced model directory")->required();
    check->add_option("--branch", spec.check_branches, "branches to check (repeatable)");
    check->add_option("--opt-tol", spec.irka.opt_tol, "pass threshold");

    auto* bode = app.add_subcommand("bode", "frequency response table (response.csv)");
    common(bode);
    bode->add_option("--omega", omega, "frequency grid, e.g. logspace:0.01:100:200");

    auto* h2 = app.add_subcommand("h2err", "H2 distance between two systems");
    common(h2);
    h2->add_option("--ref-matrices", ref_matrices, "second system: model directory");
    h2->add_option("--ref-expr", ref_expr, "second system: expression");
    h2->add_option("--omega-max", spec.quadrature.omega_max, "quadrature cutoff frequency");

    auto* inject = app.add_subcommand("inject-delay", "set the delay of a delay-free model");
    common(inject);
    inject->add_option("--tau", spec.tau, "delay")->required()->check(CLI::NonNegativeNumber);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try
    {
        spec.source = src.source();
        spec.output = out;
        spec.realify = !complex_model;
        if (!omega.empty())
            spec.omega = omega;

        if (interp->parsed())
            spec.mode = tangential ? dloewner::JobMode::interpolate : dloewner::JobMode::interpolate_hermite;
        else if (reduce->parsed())
            spec.mode = method == "tf" ? dloewner::JobMode::reduce_tf_irka : dloewner::JobMode::reduce_dtf_irka;
        else if (check->parsed())
        {
            spec.mode      = dloewner::JobMode::check_optimality;
            spec.reference = {dloewner::SourceKind::matrices, model_dir};
        }
        else if (bode->parsed())
            spec.mode = dloewner::JobMode::bode;
        else if (h2->parsed())
        {
            spec.mode = dloewner::JobMode::h2_error;
            if (!ref_matrices.empty() == !ref_expr.empty())
                throw dloewner::PreconditionError("h2err needs exactly one of --ref-matrices, --ref-expr");
            spec.reference = ref_matrices.empty()
                                 ? dloewner::ModelSource{dloewner::SourceKind::expression, ref_expr}
                                 : dloewner::ModelSource{dloewner::SourceKind::matrices, ref_matrices};
        }
        else
            spec.mode = dloewner::JobMode::inject_delay;
    }
    catch (const dloewner::PreconditionError& e)
    {
        fail(e.what());
        return 1;
    }

    info(std::string("running ") + dloewner::to_string(spec.mode));
    const dloewner::JobResult result = dloewner::run(spec);
    const auto& rep = result.report;

    if (rep.contains("warnings"))
        for (const auto& w : rep["warnings"])
            warn(w.get<std::string>());
    if (result.exit_code != 0)
        fail(rep.value("error", std::string("unknown failure")));
    else if (rep.contains("converged") && !rep["converged"].get<bool>())
        warn("iteration did not converge; best iterate returned (" +
             rep.value("diagnostic", std::string()) + ")");

    // Short machine-readable summary on stdout; the full report goes to --out.
    nlohmann::json summary = {{"status", rep["status"]}, {"exit_code", result.exit_code}};
    for (const char* key : {"order", "tau", "converged", "iterations", "h2_error", "satisfied",
                            "failed_points", "error"})
        if (rep.contains(key))
            summary[key] = rep[key];
    if (rep.contains("residuals") && rep["residuals"].is_object())
        summary["max_residual"] = rep["residuals"]["max"];
    std::cout << summary.dump() << '\n';
    return result.exit_code;
}
