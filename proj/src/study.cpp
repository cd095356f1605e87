#include "hexdg/study.hpp"

#include "hexdg/errors.hpp"
#include "hexdg/infsup.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <tuple>

namespace hexdg {

void ConvergenceConfig::validate() const
{
    if (nus.empty())
        throw ConfigError("convergence study needs at least one nu");
    if (mode == SweepMode::Levels) {
        if (min_level < 0 || max_level < min_level)
            throw ConfigError("empty level range");
        if (min_level + k_offset < 1)
            throw ConfigError("k = level + k_offset must be >= 1");
    } else if (degrees.empty()) {
        throw ConfigError("empty degree list");
    }
    run.solve.validate();
}

int rate_root(const ExactCase& c, SweepMode mode)
{
    if (mode == SweepMode::Degrees)
        return 3;
    switch (c.singular) {
    case SingularSet::Edge:
    case SingularSet::Corner:
        return 4;
    case SingularSet::CornerEdge:
    case SingularSet::None:
        return 5;
    }
    return 4;
}

GeometricMesh study_mesh(const ExactCase& c, double sigma, int level)
{
    if (c.singular == SingularSet::None)
        return build_skeleton_mesh(sigma, level);
    return build_patch_mesh(c.patch(), sigma, level);
}

namespace {

std::string patch_label(const ExactCase& c, const ConvergenceConfig& cfg)
{
    if (cfg.mode == SweepMode::Degrees)
        return std::string(to_string(cfg.mesh_patch));
    return c.singular == SingularSet::None ? "skeleton" : std::string(to_string(c.patch()));
}

} // namespace

ConvergenceStudy convergence_study(const ConvergenceConfig& cfg)
{
    cfg.validate();
    const ExactCase& c = find_case(cfg.case_name);
    for (double nu : cfg.nus)
        c.check_nu(nu);

    struct Cell {
        int level;
        int k;
    };
    std::vector<Cell> cells;
    if (cfg.mode == SweepMode::Levels) {
        for (int l = cfg.min_level; l <= cfg.max_level; ++l)
            cells.push_back({l, l + cfg.k_offset});
    } else {
        for (int k : cfg.degrees)
            cells.push_back({cfg.mesh_levels, k});
    }

    ConvergenceStudy out;
    out.root = rate_root(c, cfg.mode);
    for (double nu : cfg.nus) {
        std::shared_ptr<const ReferenceSolution> ref;
        if (!c.has_exact) {
            RunSettings rs = cfg.run;
            rs.dg.nu = nu;
            rs.dg.k = cfg.reference_k;
            const GeometricMesh rm = build_skeleton_mesh(cfg.sigma, cfg.reference_levels);
            ref = std::make_shared<const ReferenceSolution>(solve_case(rm, c, rs).field);
        }
        const ExactData exact = c.has_exact ? exact_from_case(c, nu) : exact_from_reference(ref, c.u);
        for (const Cell& cell : cells) {
            const GeometricMesh mesh = cfg.mode == SweepMode::Levels
                ? study_mesh(c, cfg.sigma, cell.level)
                : build_patch_mesh(cfg.mesh_patch, cfg.sigma, cell.level);
            RunSettings rs = cfg.run;
            rs.dg.nu = nu;
            rs.dg.k = cell.k;
            ConvergenceRow row;
            row.case_name = c.name;
            row.nu = nu;
            row.patch = patch_label(c, cfg);
            row.k = cell.k;
            row.levels = cell.level;
            Solution sol;
            try {
                sol = solve_case(mesh, c, rs);
                row.converged = true;
            } catch (const GmresError& e) {
                // keep the best iterate; the row is flagged
                const DofMap dofs = build_dofmap(mesh, cell.k);
                sol.field.mesh = mesh;
                sol.field.dofs = dofs;
                sol.field.velocity.assign(e.best().begin(), e.best().begin() + static_cast<std::ptrdiff_t>(dofs.M));
                sol.field.pressure.assign(e.best().begin() + static_cast<std::ptrdiff_t>(dofs.M),
                                          e.best().begin() + static_cast<std::ptrdiff_t>(dofs.M + dofs.N));
                sol.multiplier = e.best()[dofs.multiplier()];
                sol.report = e.report();
                sol.seconds = e.report().setup_seconds + e.report().solve_seconds;
                row.converged = false;
            }
            const ErrorResult err = dg_error(sol.field, exact, rs.dg);
            row.N = err.N;
            row.dg_error = err.dg_error;
            row.vel_error = err.velocity_h_error;
            row.pre_error = err.pressure_l2_error;
            row.gmres_iters = sol.report.iterations;
            row.seconds = sol.seconds;
            row.residual = sol.report.residual;
            row.multiplier = sol.multiplier;
            row.pressure_mean = sol.pressure_mean;
            if (cfg.quadrature_check) {
                DGConfig fine = rs.dg;
                fine.quad_overkill = rs.dg.overkill_points() + 2;
                row.dg_error_fine_quadrature = dg_error(sol.field, exact, fine).dg_error;
            }
            out.rows.push_back(row);
        }
    }
    std::stable_sort(out.rows.begin(), out.rows.end(), [](const ConvergenceRow& a, const ConvergenceRow& b) {
        return std::make_tuple(a.nu, a.levels, a.k) < std::make_tuple(b.nu, b.levels, b.k);
    });
    out.fits = fit_rates(out.rows, out.root, cfg.mode, cfg.fit_min_level);
    return out;
}

std::vector<RateFit> fit_rates(const std::vector<ConvergenceRow>& rows, int root, SweepMode mode, int fit_min_level)
{
    std::map<double, std::pair<std::vector<double>, std::vector<double>>> pts;
    for (const ConvergenceRow& r : rows) {
        const int key = mode == SweepMode::Levels ? r.levels : r.k - 1;
        if (key < fit_min_level || !(r.dg_error > 0.0))
            continue;
        pts[r.nu].first.push_back(std::pow(static_cast<double>(r.N), 1.0 / root));
        pts[r.nu].second.push_back(std::log(r.dg_error));
    }
    std::vector<RateFit> fits;
    for (const auto& [nu, xy] : pts) {
        if (xy.first.size() < 2)
            continue;
        const LineFit lf = least_squares(xy.first, xy.second);
        fits.push_back({nu, root, lf.slope, lf.intercept, lf.r2, xy.first.size()});
    }
    return fits;
}

} // namespace hexdg
