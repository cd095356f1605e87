#pragma once

// Convergence studies: either geometric refinement towards the case's
// singular set with k = level + k_offset, or a degree sweep on a fixed mesh.

#include "hexdg/problems.hpp"

#include <string>
#include <vector>

namespace hexdg {

enum class SweepMode { Levels, Degrees };

struct ConvergenceConfig {
    std::string case_name = "EdgeSing";
    std::vector<double> nus{0.375};
    SweepMode mode = SweepMode::Levels;
    double sigma = 0.5;

    // Levels mode
    int min_level = 0;
    int max_level = 4;
    int k_offset = 1;

    // Degrees mode: fixed mesh
    PatchKind mesh_patch = PatchKind::Uniform;
    int mesh_levels = 2;
    std::vector<int> degrees{1, 2, 3, 4};

    RunSettings run;

    // Reference solution for cases without an exact solution
    int reference_levels = 3;
    int reference_k = 4;

    /// Recompute each error with two more quadrature points per axis
    /// (reported in the summary, not the CSV).
    bool quadrature_check = true;
    /// Rows with level >= fit_min_level enter the rate fit (Levels mode);
    /// in Degrees mode rows with k >= fit_min_level + 1.
    int fit_min_level = 2;

    void validate() const;
};

struct ConvergenceRow {
    std::string case_name;
    double nu = 0.0;
    std::string patch;
    int k = 0;
    int levels = 0;
    std::size_t N = 0;
    double dg_error = 0.0;
    double vel_error = 0.0;
    double pre_error = 0.0;
    int gmres_iters = 0;
    double seconds = 0.0;
    // summary-only diagnostics
    double residual = 0.0;
    bool converged = false;
    double multiplier = 0.0;
    double pressure_mean = 0.0;
    double dg_error_fine_quadrature = 0.0;
};

struct RateFit {
    double nu = 0.0;
    int root = 4;          ///< error fitted against N^(1/root)
    double slope = 0.0;    ///< -b in exp(-b N^(1/root))
    double intercept = 0.0;
    double r2 = 0.0;
    std::size_t points = 0;
};

struct ConvergenceStudy {
    std::vector<ConvergenceRow> rows; ///< sorted by (nu, levels, k)
    std::vector<RateFit> fits;        ///< one per nu with >= 2 fit points
    int root = 4;
};

/// Root used for the rate fit: 5 for corner-edge singularities, 4 for edge
/// or corner, 3 for smooth solutions on a fixed mesh.
int rate_root(const ExactCase& c, SweepMode mode);

/// Mesh of a Levels-mode row: the case's patch, or the all-edges skeleton
/// mesh for cases without a singular set.
GeometricMesh study_mesh(const ExactCase& c, double sigma, int level);

/// Solver non-convergence is recorded in the row (converged = false, error
/// of the best iterate) rather than thrown.
ConvergenceStudy convergence_study(const ConvergenceConfig& cfg);

std::vector<RateFit> fit_rates(const std::vector<ConvergenceRow>& rows, int root, SweepMode mode, int fit_min_level);

} // namespace hexdg
