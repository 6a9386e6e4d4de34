#include "mrlab/acceptance.hpp"
#include "mrlab/config.hpp"
#include "mrlab/errors.hpp"
#include "mrlab/runner.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

namespace {

struct Common {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<int> probes;
    bool quiet = false;
};

void add_common(CLI::App* sub, Common& c, bool needs_config)
{
    auto* opt = sub->add_option("--config", c.config, "experiment config file");
    if (needs_config) {
        opt->required()->check(CLI::ExistingFile);
    }
    sub->add_option("--out", c.out, "output directory (overrides [output] dir)");
    sub->add_option("--seed", c.seed, "random seed (overrides [analysis] seed)");
    sub->add_option("--probes", c.probes, "number of random probes (overrides [analysis] probes)");
    sub->add_flag("--quiet", c.quiet, "suppress the JSON report on stdout");
}

mrlab::RunConfig load(const Common& c)
{
    mrlab::RunConfig cfg = mrlab::load_run_config(c.config);
    if (c.seed) {
        cfg.seed = *c.seed;
        cfg.forcing.seed = *c.seed;
    }
    if (c.probes) {
        cfg.probes = *c.probes;
    }
    return cfg;
}

std::optional<std::string> out_dir(const Common& c, const mrlab::RunConfig& cfg)
{
    if (!c.out.empty()) {
        return c.out;
    }
    return cfg.output_dir;
}

int finish(const nlohmann::json& report, bool quiet)
{
    if (!quiet) {
        std::cout << mrlab::dump_report(report);
    }
    return report.value("pass", false) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"mrlab: maximal regularity experiments for non-autonomous parabolic problems"};
    app.set_version_flag("--version", std::string(mrlab::kVersion));
    app.require_subcommand(1);

    Common solve_opts;
    auto* solve = app.add_subcommand("solve", "solve a linear problem and report norms and diagnostics");
    add_common(solve, solve_opts, true);

    Common est_opts;
    auto* estimate = app.add_subcommand("estimate", "estimate the maximal regularity constant");
    add_common(estimate, est_opts, true);

    Common quasi_opts;
    auto* quasi = app.add_subcommand("quasilinear", "solve a quasilinear problem by fixed-point iteration");
    add_common(quasi, quasi_opts, true);

    mrlab::WindowRequest wreq;
    double s = 0.0;
    std::string mode = "isomorphism";
    bool quiet_window = false;
    auto* window = app.add_subcommand("window", "compute extrapolation windows");
    window->add_option("--c-lower", wreq.c_lower, "ellipticity lower constant")->required();
    window->add_option("--c-upper", wreq.c_upper, "ellipticity upper constant")->required();
    window->add_option("--C", wreq.c, "maximal regularity constant of the reference problem")->required();
    auto* s_opt = window->add_option("--s", s, "exponent s > 2 (kappa mode)");
    window->add_option("--r0", wreq.r0, "first endpoint exponent (Hilbert mode)");
    window->add_option("--r1", wreq.r1, "second endpoint exponent (Hilbert mode)");
    window->add_option("--mode", mode, "surjective | isomorphism")
        ->check(CLI::IsMember({"surjective", "isomorphism"}));
    window->add_flag("--estimate", wreq.c_is_estimate, "C is an empirical estimate");
    window->add_flag("--quiet", quiet_window, "suppress output");

    std::vector<std::string> only;
    bool quiet_verify = false;
    auto* verify = app.add_subcommand("verify", "run the acceptance suite");
    verify->add_option("--only", only, "criterion ids to run (default: all)");
    verify->add_flag("--quiet", quiet_verify, "print only failures");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*solve) {
            const auto cfg = load(solve_opts);
            return finish(mrlab::run_solve(cfg, out_dir(solve_opts, cfg)), solve_opts.quiet);
        }
        if (*estimate) {
            const auto cfg = load(est_opts);
            return finish(mrlab::run_estimate(cfg, out_dir(est_opts, cfg)), est_opts.quiet);
        }
        if (*quasi) {
            const auto cfg = load(quasi_opts);
            return finish(mrlab::run_quasilinear(cfg, out_dir(quasi_opts, cfg)), quasi_opts.quiet);
        }
        if (*window) {
            if (s_opt->count() > 0) {
                wreq.s = s;
            }
            wreq.mode = mode == "surjective" ? mrlab::WindowMode::surjective : mrlab::WindowMode::isomorphism;
            return finish(mrlab::run_window(wreq), quiet_window);
        }
        if (*verify) {
            bool all = true;
            for (const auto& r : mrlab::run_acceptance(only)) {
                all = all && r.pass;
                if (!quiet_verify || !r.pass) {
                    std::cout << mrlab::format_result(r) << '\n';
                }
            }
            return all ? 0 : 1;
        }
    } catch (const mrlab::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
