#include "hexdg/cli.hpp"

#include "hexdg/config.hpp"
#include "hexdg/errors.hpp"
#include "hexdg/infsup.hpp"
#include "hexdg/kernels.hpp"
#include "hexdg/mesh_io.hpp"
#include "hexdg/problems.hpp"
#include "hexdg/report.hpp"
#include "hexdg/study.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>

namespace hexdg {

namespace {

using Handler = std::function<int(const RunConfig&, std::ostream&, std::ostream&)>;

struct Command {
    std::string name;
    std::string description;
    std::vector<KeySpec> keys;
    Handler run;
};

std::vector<KeySpec> dg_keys()
{
    return {{"theta", "1", "consistency parameter in [-1,1]"},
            {"gamma", "10", "penalty parameter"},
            {"sigma", "1/2", "geometric grading factor"},
            {"quad_form", "0", "quadrature points per axis for the forms (0: k+1)"},
            {"quad_overkill", "0", "quadrature points per axis for rhs/errors (0: k+4)"}};
}

std::vector<KeySpec> solver_keys()
{
    return {{"tol", "1e-12", "absolute residual tolerance"},
            {"max_iter", "20000", "maximum GMRES iterations"},
            {"restart", "200", "GMRES restart length"},
            {"preconditioner", "ilu0", "ilu0|none"}};
}

std::vector<KeySpec> concat(std::vector<KeySpec> a, const std::vector<KeySpec>& b)
{
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

RunSettings run_settings(const RunConfig& c)
{
    RunSettings s;
    s.dg.theta = c.real("theta");
    s.dg.gamma = c.real("gamma");
    s.dg.quad_form = c.integer("quad_form");
    s.dg.quad_overkill = c.integer("quad_overkill");
    s.solve.tol = c.real("tol");
    s.solve.max_iter = c.integer("max_iter");
    s.solve.restart = c.integer("restart");
    s.solve.preconditioner = parse_preconditioner(c.str("preconditioner"));
    return s;
}

// Runs fn on the named file, or on `out` for "-".
void with_output(const std::string& path, std::ostream& out, const std::function<void(std::ostream&)>& fn)
{
    if (path.empty())
        return;
    if (path == "-") {
        fn(out);
        return;
    }
    std::ofstream f(path);
    if (!f)
        throw ConfigError("cannot open " + path + " for writing");
    fn(f);
}

// ---- mesh ----

int cmd_mesh(const RunConfig& c, std::ostream& out, std::ostream& err)
{
    const PatchKind kind = parse_patch_kind(c.str("patch"));
    const GeometricMesh mesh = c.boolean("skeleton") ? build_skeleton_mesh(c.real("sigma"), c.integer("levels"))
                                                     : build_patch_mesh(kind, c.real("sigma"), c.integer("levels"));
    const FaceSet faces = extract_faces(mesh);
    nlohmann::json j = mesh_to_json(mesh);
    with_output(c.str("output"), out, [&](std::ostream& o) { o << j.dump(1) << '\n'; });
    double boundary_area = 0.0;
    for (const Face& f : faces.faces)
        if (!f.interior())
            boundary_area += f.area();
    std::ostream& info = c.str("output") == "-" ? err : out;
    info << "elements=" << mesh.size() << " macro=" << mesh.macro.size()
         << " volume=" << format_double(mesh.domain_volume()) << " interior_faces=" << faces.interior_count()
         << " boundary_faces=" << faces.boundary_count() << " boundary_area=" << format_double(boundary_area)
         << '\n';
    return exit_ok;
}

// ---- infsup ----

int cmd_infsup(const RunConfig& c, std::ostream& out, std::ostream&)
{
    InfSupStudyConfig sc;
    for (const std::string& k : c.list("kinds"))
        sc.kinds.push_back(parse_infsup_kind(k));
    for (const std::string& p : c.list("patches"))
        sc.patches.push_back(parse_patch_kind(p));
    sc.degrees = c.int_list("k");
    sc.levels = c.int_list("levels");
    sc.sigma = c.real("sigma");
    sc.infsup.theta = c.real("theta");
    sc.infsup.gamma = c.real("gamma");
    sc.infsup.dense_cap = static_cast<std::size_t>(c.integer("dense_cap"));
    sc.infsup.kernel_tol = c.real("kernel_tol");
    const InfSupStudy study = infsup_study(sc);
    std::vector<ExponentFit> fits;
    for (InfSupKind kind : sc.kinds)
        for (PatchKind patch : sc.patches)
            if (auto f = fit_exponent(study.rows, kind, patch))
                fits.push_back(*f);
    const ConfigEcho echo = c.echo();
    with_output(c.str("output"), out, [&](std::ostream& o) { write_infsup_csv(o, study.rows, echo); });
    with_output(c.str("summary"), out,
                [&](std::ostream& o) { o << infsup_summary(study, fits, echo).dump(1) << '\n'; });
    return exit_ok;
}

// ---- solve ----

nlohmann::json field_json(const DiscreteField& f)
{
    return {{"k", f.dofs.k}, {"mesh", mesh_to_json(f.mesh)}, {"velocity", f.velocity}, {"pressure", f.pressure}};
}

int cmd_solve(const RunConfig& c, std::ostream& out, std::ostream&)
{
    const ExactCase& ec = find_case(c.str("case"));
    RunSettings rs = run_settings(c);
    rs.dg.nu = c.real("nu");
    rs.dg.k = c.integer("k");
    ec.check_nu(rs.dg.nu);
    const std::string patch = c.str("patch");
    const double sigma = c.real("sigma");
    const int levels = c.integer("levels");
    const GeometricMesh mesh = patch == "auto" ? study_mesh(ec, sigma, levels)
        : patch == "skeleton"                  ? build_skeleton_mesh(sigma, levels)
                                               : build_patch_mesh(parse_patch_kind(patch), sigma, levels);

    std::unique_ptr<std::ofstream> log;
    if (!c.str("log").empty()) {
        log = std::make_unique<std::ofstream>(c.str("log"));
        if (!*log)
            throw ConfigError("cannot open " + c.str("log"));
        rs.solve.log = log.get();
    }
    if (!c.str("matrix").empty()) {
        const FaceSet faces = extract_faces(mesh);
        const DofMap dofs = build_dofmap(mesh, rs.dg.k);
        write_matrix_market(c.str("matrix"), assemble_augmented(assemble_blocks(mesh, faces, dofs, rs.dg)));
    }
    const Solution sol = solve_case(mesh, ec, rs);
    nlohmann::json j;
    j["config"] = config_json(c.echo());
    j["case"] = ec.name;
    j["elements"] = mesh.size();
    j["M"] = sol.field.dofs.M;
    j["N"] = sol.field.dofs.N;
    j["multiplier"] = sol.multiplier;
    j["pressure_mean"] = sol.pressure_mean;
    j["residual"] = sol.report.residual;
    j["iterations"] = sol.report.iterations;
    j["converged"] = sol.report.converged;
    j["preconditioner"] = to_string(sol.report.used);
    j["ilu_fallback"] = sol.report.ilu_fallback;
    j["seconds"] = sol.seconds;
    if (ec.has_exact) {
        const ErrorResult e = dg_error(sol.field, exact_from_case(ec, rs.dg.nu), rs.dg);
        j["error"] = {{"dg_error", e.dg_error},
                      {"velocity_h_error", e.velocity_h_error},
                      {"pressure_l2_error", e.pressure_l2_error},
                      {"N", e.N}};
    }
    with_output(c.str("output"), out, [&](std::ostream& o) { o << j.dump(1) << '\n'; });
    with_output(c.str("solution"), out, [&](std::ostream& o) { o << field_json(sol.field).dump() << '\n'; });
    return exit_ok;
}

// ---- convergence ----

int cmd_convergence(const RunConfig& c, std::ostream& out, std::ostream&)
{
    ConvergenceConfig cc;
    cc.case_name = c.str("case");
    cc.nus = c.real_list("nus");
    const std::string mode = c.str("mode");
    if (mode == "levels")
        cc.mode = SweepMode::Levels;
    else if (mode == "degrees")
        cc.mode = SweepMode::Degrees;
    else
        throw ConfigError("mode must be levels|degrees");
    cc.sigma = c.real("sigma");
    const std::vector<int> levels = c.int_list("levels");
    if (cc.mode == SweepMode::Levels) {
        if (levels.empty())
            throw ConfigError("empty level range");
        cc.min_level = *std::min_element(levels.begin(), levels.end());
        cc.max_level = *std::max_element(levels.begin(), levels.end());
    }
    cc.k_offset = c.integer("k_offset");
    cc.mesh_patch = parse_patch_kind(c.str("mesh_patch"));
    cc.mesh_levels = c.integer("mesh_levels");
    cc.degrees = c.int_list("degrees");
    cc.run = run_settings(c);
    cc.reference_levels = c.integer("reference_levels");
    cc.reference_k = c.integer("reference_k");
    cc.fit_min_level = c.integer("fit_min_level");
    cc.quadrature_check = c.boolean("quadrature_check");

    const ConvergenceStudy study = convergence_study(cc);
    const ConfigEcho echo = c.echo();
    with_output(c.str("output"), out, [&](std::ostream& o) { write_convergence_csv(o, study.rows, echo); });
    with_output(c.str("summary"), out,
                [&](std::ostream& o) { o << convergence_summary(study, echo).dump(1) << '\n'; });
    with_output(c.str("plot"), out, [&](std::ostream& o) { o << convergence_svg(study, cc.case_name); });
    for (const ConvergenceRow& r : study.rows)
        if (!r.converged)
            return exit_solver;
    return exit_ok;
}

// ---- verify ----

int cmd_verify(const RunConfig& c, std::ostream& out, std::ostream&)
{
    const auto checks = run_verification(static_cast<unsigned>(c.integer("seed")), c.integer("points"));
    bool ok = true;
    for (const VerifyCheck& v : checks) {
        out << (v.passed ? "PASS " : "FAIL ") << v.name << ": " << v.detail << '\n';
        ok = ok && v.passed;
    }
    return ok ? exit_ok : exit_invariant;
}

std::vector<Command> commands()
{
    std::vector<Command> cmds;
    cmds.push_back({"mesh",
                    "build a geometric patch mesh and write it as JSON",
                    {{"patch", "uniform", "uniform|edge|corner|corner-edge|corner-all-edges|fichera"},
                     {"skeleton", "false", "refine every cube corner and edge (overrides patch)"},
                     {"sigma", "1/2", "geometric grading factor"},
                     {"levels", "0", "refinement levels"},
                     {"output", "-", "mesh JSON path ('-' for stdout)"}},
                    cmd_mesh});
    cmds.push_back({"infsup",
                    "inf-sup constants over patches, degrees and levels",
                    {{"kinds", "gammaB", "comma list of gammaB|gammaA"},
                     {"patches", "edge", "comma list of patch kinds"},
                     {"k", "2", "degrees, e.g. 2,3 or 2..4"},
                     {"levels", "1..4", "levels, e.g. 1..5"},
                     {"sigma", "1/2", "geometric grading factor"},
                     {"theta", "1", "consistency parameter"},
                     {"gamma", "10", "penalty parameter"},
                     {"dense_cap", "6000", "largest M+N for dense SVD"},
                     {"kernel_tol", "1e-10", "kernel detection threshold relative to sigma_1"},
                     {"output", "-", "CSV path"},
                     {"summary", "", "exponent-fit JSON path"}},
                    cmd_infsup});
    cmds.push_back({"solve",
                    "solve one catalog case",
                    concat(concat({{"case", "PolyExact", "catalog case"},
                                   {"nu", "1/4", "Poisson ratio in (0,1/2]"},
                                   {"patch", "auto", "auto|skeleton|patch kind"},
                                   {"levels", "0", "refinement levels"},
                                   {"k", "2", "polynomial degree"}},
                                  dg_keys()),
                           concat(solver_keys(), {{"output", "-", "result JSON path"},
                                                  {"solution", "", "solution JSON path"},
                                                  {"log", "", "GMRES iteration log (JSON lines)"},
                                                  {"matrix", "", "MatrixMarket export of the augmented matrix"}})),
                    cmd_solve});
    cmds.push_back({"convergence",
                    "convergence study of a catalog case",
                    concat(concat({{"case", "EdgeSing", "catalog case"},
                                   {"nus", "3/8", "comma list of Poisson ratios"},
                                   {"mode", "levels", "levels (k = level + k_offset) | degrees (fixed mesh)"},
                                   {"levels", "0..4", "level range (levels mode)"},
                                   {"k_offset", "1", "k = level + k_offset"},
                                   {"mesh_patch", "uniform", "fixed mesh patch (degrees mode)"},
                                   {"mesh_levels", "2", "fixed mesh levels (degrees mode)"},
                                   {"degrees", "1..4", "degrees (degrees mode)"},
                                   {"reference_levels", "3", "reference mesh levels (cases without exact solution)"},
                                   {"reference_k", "4", "reference degree"},
                                   {"fit_min_level", "2", "first level entering the rate fit"},
                                   {"quadrature_check", "true", "recompute errors with a finer rule"}},
                                  dg_keys()),
                           concat(solver_keys(), {{"output", "-", "CSV path"},
                                                  {"summary", "", "summary JSON path"},
                                                  {"plot", "", "SVG path"}})),
                    cmd_convergence});
    cmds.push_back({"verify",
                    "run the built-in oracle checks",
                    {{"seed", "12345", "random seed"}, {"points", "50", "sample points per oracle"}},
                    cmd_verify});
    return cmds;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    std::vector<const char*> argv{"hexdg"};
    for (const std::string& a : args)
        argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    const std::vector<Command> cmds = commands();
    CLI::App app{"Mixed DG solver and inf-sup toolkit for the Lame/Stokes system", "hexdg"};
    app.require_subcommand(1, 1);
    std::map<std::string, std::map<std::string, std::string>> flags;
    std::map<std::string, std::string> config_files;
    std::map<std::string, CLI::App*> subs;
    for (const Command& cmd : cmds) {
        CLI::App* sub = app.add_subcommand(cmd.name, cmd.description);
        subs[cmd.name] = sub;
        sub->add_option("--config", config_files[cmd.name], "key = value configuration file");
        for (const KeySpec& k : cmd.keys)
            sub->add_option("--" + k.name, flags[cmd.name][k.name], k.help + " [" + k.default_value + "]");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_config;
    }
    for (const Command& cmd : cmds) {
        CLI::App* sub = subs[cmd.name];
        if (!sub->parsed())
            continue;
        try {
            RunConfig cfg(cmd.keys);
            if (!config_files[cmd.name].empty())
                cfg.load_file(config_files[cmd.name]);
            for (const KeySpec& k : cmd.keys)
                if (sub->count("--" + k.name) > 0)
                    cfg.set(k.name, flags[cmd.name][k.name]);
            return cmd.run(cfg, out, err);
        } catch (const ConfigError& e) {
            err << "configuration error: " << e.what() << '\n';
            return exit_config;
        } catch (const SolverError& e) {
            err << "solver error: " << e.what() << '\n';
            return exit_solver;
        } catch (const InvariantError& e) {
            err << "invariant violated: " << e.what() << '\n';
            return exit_invariant;
        }
    }
    return exit_config;
}

} // namespace hexdg
