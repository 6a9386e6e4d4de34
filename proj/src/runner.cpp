#include "mrlab/runner.hpp"

#include "mrlab/errors.hpp"

#include <algorithm>
#include <filesystem>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace mrlab {

using nlohmann::json;

namespace {

constexpr double kLionsReferenceBound = 3.0;

json criterion(const std::string& id, const std::string& name, bool pass, json detail = json::object())
{
    return json{{"id", id}, {"name", name}, {"pass", pass}, {"detail", std::move(detail)}};
}

bool all_pass(const json& criteria)
{
    return std::all_of(criteria.begin(), criteria.end(), [](const json& c) { return c.at("pass").get<bool>(); });
}

std::filesystem::path prepare_dir(const std::string& dir)
{
    std::filesystem::path p(dir);
    std::filesystem::create_directories(p);
    return p;
}

void write_text(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << text;
}

void write_trajectory(const std::filesystem::path& path, const Trajectory& traj)
{
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    write_trajectory_csv(out, traj);
}

double forcing_norm(const Forcing& f, const TimeGrid& grid, const P1Space& space, double r)
{
    return bochner_norm(dual_norm_series(f, space), grid, r);
}

}  // namespace

json config_to_json(const RunConfig& c)
{
    json j;
    j["mesh"] = {{"kind", c.mesh.kind}, {"nx", c.mesh.nx}, {"ny", c.mesh.ny}, {"lx", c.mesh.lx}, {"ly", c.mesh.ly},
                 {"path", c.mesh.path}};
    j["boundary"] = {{"dirichlet", c.dirichlet}};
    j["coefficient"] = {{"kind", c.coefficient.kind},         {"matrices", c.coefficient.matrices},
                        {"breakpoints", c.coefficient.breakpoints}, {"shape", c.coefficient.shape},
                        {"center", c.coefficient.center},     {"velocity", c.coefficient.velocity},
                        {"size", c.coefficient.size},         {"inside", c.coefficient.inside},
                        {"outside", c.coefficient.outside}};
    j["time"] = {{"T", c.horizon}, {"steps", c.steps}, {"extra_nodes", c.extra_nodes}};
    j["forcing"] = {{"profile", c.forcing.profile},
                    {"spatial", c.forcing.spatial},
                    {"amplitude", c.forcing.amplitude},
                    {"seed", c.forcing.seed}};
    j["analysis"] = {{"r", c.r},          {"q", c.q},           {"shift", c.shift}, {"alpha", c.alpha},
                     {"probes", c.probes}, {"seed", c.seed},     {"reference", c.reference}};
    if (c.fixed_point) {
        j["fixed_point"] = {{"tolerance", c.fixed_point->tolerance},
                            {"max_iterations", c.fixed_point->max_iterations},
                            {"damping", c.fixed_point->damping},
                            {"sigma", c.sigma},
                            {"sigma_center", c.sigma_center},
                            {"sigma_amplitude", c.sigma_amplitude}};
    }
    return j;
}

std::string dump_report(const json& report)
{
    return report.dump(2) + "\n";
}

json run_solve(const RunConfig& cfg, const std::optional<std::string>& out_dir)
{
    const Problem pb = build_problem(cfg);
    const P1Space& space = pb.space;
    const Trajectory u = solve_nonautonomous(pb.field, pb.forcing, pb.grid, space, cfg.shift);

    const auto energy = energy_residual(u, pb.field, pb.forcing, space, cfg.shift);
    double work_scale = 0.0;
    for (Index k = 1; k < pb.grid.num_nodes(); ++k) {
        work_scale += pb.grid.step(k) * std::abs(pb.forcing[static_cast<std::size_t>(k)].dot(u.at(k)));
    }
    const double energy_max = *std::max_element(energy.begin(), energy.end());
    const double energy_slack = 1e-12 * std::max(1.0, work_scale);

    const MrNorm mr = mr_norm_parts(u, cfg.r, cfg.q, space);
    json criteria = json::array();
    json ratios = json::object();
    json bounds = {{"c_lower", pb.field.bounds().lower()}, {"c_upper", pb.field.bounds().upper()}};

    if (cfg.shift > 0.0) {
        const EllipticityBounds fb = form_bounds(pb.field.bounds(), cfg.shift);
        const AprioriReport ap = apriori_check(u, pb.forcing, space, fb);
        ratios["apriori_state"] = ap.state.ratio;
        ratios["apriori_derivative"] = ap.derivative.ratio;
        ratios["apriori_mr"] = ap.maximal_regularity.ratio;
        bounds["form_c_lower"] = fb.lower();
        bounds["form_c_upper"] = fb.upper();
        bounds["apriori_state_constant"] = ap.state.constant;
        bounds["apriori_derivative_constant"] = ap.derivative.constant;
        bounds["apriori_mr_constant"] = ap.maximal_regularity.constant;
        criteria.push_back(criterion("A1", "lions_apriori_estimates", ap.pass,
                                     {{"state_ratio", ap.state.ratio},
                                      {"derivative_ratio", ap.derivative.ratio},
                                      {"mr_ratio", ap.maximal_regularity.ratio},
                                      {"tolerance", 1.05}}));
    } else {
        criteria.push_back(criterion("A1", "lions_apriori_estimates", true,
                                     {{"applicable", false}, {"reason", "shift = 0: no W^{1,2} coercivity bound"}}));
    }
    criteria.push_back(criterion("A2", "energy_dissipativity", energy_max <= energy_slack,
                                 {{"max_residual", energy_max}, {"slack", energy_slack}}));

    const ConstantEstimate ref = estimate_reference_constant(2.0, pb.grid, space, cfg.probes, cfg.seed);
    bounds["reference_constant_estimate"] = ref.value;
    bounds["reference_constant_bound"] = kLionsReferenceBound;
    criteria.push_back(criterion("A3", "reference_constant_bound", ref.value <= kLionsReferenceBound * (1.0 + 1e-6),
                                 {{"estimate", ref.value}, {"probes", ref.ratios.size()}}));

    const EllipticityReport ell = verify_ellipticity(pb.field, space.mesh(), 11, cfg.horizon);
    criteria.push_back(criterion("ellipticity", "declared_bounds_hold", ell.pass,
                                 {{"observed_lower", ell.observed_lower},
                                  {"observed_upper", ell.observed_upper},
                                  {"violations", ell.violations.size()}}));

    json norms = {{"mr", mr.total()},
                  {"mr_state", mr.state},
                  {"mr_derivative", mr.derivative},
                  {"mr_dual_converged", mr.converged},
                  {"mr_tilde", mr_tilde_norm(u, cfg.r, space)},
                  {"forcing_Lr_Wm12", forcing_norm(pb.forcing, pb.grid, space, cfg.r)},
                  {"holder_quotient", holder_quotient(u, cfg.alpha, space.mass())},
                  {"sup_L2", u.sup_l2(space.mass())},
                  {"energy_residual_final", energy.back()},
                  {"energy_residual_max", energy_max}};

    json report = {{"command", "solve"},
                   {"version", kVersion},
                   {"seed", cfg.seed},
                   {"input", config_to_json(cfg)},
                   {"dofs", space.num_dofs()},
                   {"steps", pb.grid.num_steps()},
                   {"norms", norms},
                   {"ratios", ratios},
                   {"bounds", bounds},
                   {"criteria", criteria},
                   {"pass", all_pass(criteria)}};
    if (out_dir) {
        const auto dir = prepare_dir(*out_dir);
        write_trajectory(dir / "trajectory.csv", u);
        write_text(dir / "report.json", dump_report(report));
    }
    return report;
}

json run_window(const WindowRequest& req)
{
    json out;
    const std::string label = req.c_is_estimate ? "optimistic" : "guaranteed";
    if (req.s) {
        const KappaResult k = kappa_r0(req.c_lower, req.c_upper, req.c, *req.s);
        out = {{"mode", "kappa"}, {"kappa", k.kappa}, {"r0", k.r0}, {"window", {k.lo, k.hi}}, {"bound", k.bound},
               {"s", *req.s}};
    } else {
        const WindowResult w = hilbert_window(req.c_lower, req.c_upper, req.c, req.r0, req.r1, req.mode);
        out = {{"mode", req.mode == WindowMode::surjective ? "surjective" : "isomorphism"},
               {"theta", w.theta},
               {"radius", w.radius},
               {"window", {w.lo, w.hi}},
               {"center", w.center},
               {"bound", w.bound},
               {"r0", req.r0},
               {"r1", req.r1}};
    }
    out["c_lower"] = req.c_lower;
    out["c_upper"] = req.c_upper;
    out["C"] = req.c;
    out["label"] = label;
    out["criteria"] = json::array();
    out["pass"] = true;
    return out;
}

json run_estimate(const RunConfig& cfg, const std::optional<std::string>& out_dir)
{
    const Problem pb = build_problem(cfg);
    ConstantEstimate est;
    if (cfg.reference == "duality") {
        est = estimate_reference_constant(cfg.r, pb.grid, pb.space, cfg.probes, cfg.seed);
    } else {
        est = estimate_mr_constant(field_stiffness(pb.field, pb.grid, pb.space), cfg.r, pb.grid, pb.space,
                                   cfg.probes, cfg.seed, cfg.shift);
    }
    json criteria = json::array();
    if (cfg.reference == "duality" && cfg.r == 2.0) {
        criteria.push_back(criterion("A3", "reference_constant_bound",
                                     est.value <= kLionsReferenceBound * (1.0 + 1e-6),
                                     {{"estimate", est.value}, {"bound", kLionsReferenceBound}}));
    }
    json report = {{"command", "estimate"},
                   {"version", kVersion},
                   {"seed", cfg.seed},
                   {"input", config_to_json(cfg)},
                   {"reference", cfg.reference},
                   {"r", cfg.r},
                   {"estimate", est.value},
                   {"lower_bound", true},
                   {"best_probe", est.best_probe},
                   {"probe_ratios", est.ratios},
                   {"probes", est.ratios.size()},
                   {"dual_converged", est.converged},
                   {"criteria", criteria},
                   {"pass", all_pass(criteria)}};
    if (out_dir) {
        write_text(prepare_dir(*out_dir) / "report.json", dump_report(report));
    }
    return report;
}

json run_quasilinear(const RunConfig& cfg, const std::optional<std::string>& out_dir)
{
    const Problem pb = build_problem(cfg);
    const P1Space& space = pb.space;
    const FixedPointConfig fp = cfg.fixed_point.value_or(FixedPointConfig{});
    const SigmaFunction sigma = build_sigma(cfg);
    const FixedPointResult res = fixed_point_solve(pb.field, sigma, pb.forcing, pb.grid, space, fp);
    const double residual = quasilinear_residual(res.solution, pb.field, sigma, pb.forcing, space);
    const CoefficientField eff = effective_field(res.solution, pb.field, sigma, space);
    const EllipticityReport ell = verify_ellipticity(eff, space.mesh(), 11, cfg.horizon);
    const MrNorm mr = mr_norm_parts(res.solution, cfg.r, cfg.q, space);

    json criteria = json::array();
    criteria.push_back(criterion("A9.converged", "fixed_point_converged", res.converged,
                                 {{"iterations", res.iterations}, {"tolerance", fp.tolerance}}));
    criteria.push_back(criterion("A9.residual", "quasilinear_residual", residual < 10.0 * fp.tolerance,
                                 {{"residual", residual}, {"threshold", 10.0 * fp.tolerance}}));
    criteria.push_back(criterion("A9.ellipticity", "effective_coefficient_bounds", ell.pass,
                                 {{"declared_lower", eff.bounds().lower()},
                                  {"declared_upper", eff.bounds().upper()},
                                  {"observed_lower", ell.observed_lower},
                                  {"observed_upper", ell.observed_upper}}));

    json report = {{"command", "quasilinear"},
                   {"version", kVersion},
                   {"seed", cfg.seed},
                   {"input", config_to_json(cfg)},
                   {"iterations", res.iterations},
                   {"converged", res.converged},
                   {"history", res.history},
                   {"norms",
                    {{"residual", residual},
                     {"mr", mr.total()},
                     {"mr_state", mr.state},
                     {"mr_derivative", mr.derivative},
                     {"sup_L2", res.solution.sup_l2(space.mass())}}},
                   {"bounds", {{"sigma_lower", sigma.lower()}, {"sigma_upper", sigma.upper()}}},
                   {"criteria", criteria},
                   {"pass", all_pass(criteria)}};
    if (out_dir) {
        const auto dir = prepare_dir(*out_dir);
        write_trajectory(dir / "trajectory.csv", res.solution);
        std::ostringstream hist;
        hist << "iteration,distance,damping\n";
        char buf[96];
        for (std::size_t i = 0; i < res.history.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", i + 1, res.history[i], res.damping[i]);
            hist << buf;
        }
        write_text(dir / "history.csv", hist.str());
        write_text(dir / "report.json", dump_report(report));
    }
    return report;
}

}  // namespace mrlab
