#pragma once

// Discrete inf-sup constants as smallest positive singular values:
//   gamma_B = sigma_{N-1}( L_D^{-1} B L_E^{-T} )
//   gamma_a = sigma_{M+N-1}( L^{-1} [[A, B], [-B^T, C]] L^{-T} ),  L L^T = diag(D, (2-2nu) E)
// with Cholesky factors in place of symmetric square roots (same singular
// values). Both matrices have exactly one kernel direction: q = 1.

#include "hexdg/assembly.hpp"
#include "hexdg/mesh.hpp"
#include "hexdg/solver.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hexdg {

enum class InfSupKind { GammaB, GammaA };

std::string_view to_string(InfSupKind k);
InfSupKind parse_infsup_kind(std::string_view s);

struct InfSupConfig {
    double theta = 1.0;
    double gamma = 10.0;
    std::size_t dense_cap = default_dense_cap; ///< on M + N
    double kernel_tol = 1e-10;                 ///< relative to sigma_1
};

struct InfSupResult {
    InfSupKind kind = InfSupKind::GammaB;
    PatchKind patch = PatchKind::Uniform;
    double sigma = 0.5;
    int levels = 0;
    int k = 2;
    std::size_t M = 0;
    std::size_t N = 0;
    double value = 0.0;        ///< smallest positive singular value
    double sigma_kernel = 0.0; ///< smallest singular value (kernel)
    double sigma_max = 0.0;
    double seconds = 0.0;
    Eigen::VectorXd singular_values; ///< non-increasing, all of them
};

/// Throws ConfigError when M+N exceeds the cap or N < 2 (empty quotient
/// space), InvariantError when the kernel is not exactly one-dimensional.
InfSupResult gamma_B(const GeometricMesh& mesh, int k, const InfSupConfig& cfg = {});
InfSupResult gamma_a(const GeometricMesh& mesh, int k, const InfSupConfig& cfg = {});

/// Singular values of L_D^{-1} B L_E^{-T}.
Eigen::VectorXd gamma_B_spectrum(const Eigen::MatrixXd& B, const Eigen::MatrixXd& D, const Eigen::MatrixXd& E);
/// Singular values of the Cholesky-normalized saddle matrix at Poisson ratio nu.
Eigen::VectorXd gamma_a_spectrum(const Eigen::MatrixXd& saddle, const Eigen::MatrixXd& D,
                                 const Eigen::MatrixXd& E, double nu);

/// Right singular vector of the smallest singular value of the normalized
/// saddle matrix, mapped back to coefficient space (velocity then pressure),
/// scaled to unit max norm. Small systems only.
Eigen::VectorXd gamma_a_kernel_vector(const GeometricMesh& mesh, int k, const InfSupConfig& cfg = {});

/// Throws InvariantError unless sigma_kernel <= tol sigma_1 < value.
void check_kernel(const Eigen::VectorXd& sv, double tol, std::string_view what);

struct InfSupStudyConfig {
    std::vector<InfSupKind> kinds;
    std::vector<PatchKind> patches;
    std::vector<int> degrees;
    std::vector<int> levels;
    double sigma = 0.5;
    InfSupConfig infsup;
};

struct SkippedCell {
    InfSupKind kind;
    PatchKind patch;
    int k;
    int levels;
    std::string reason;
};

struct InfSupStudy {
    std::vector<InfSupResult> rows; ///< sorted by (kind, patch, k, levels)
    std::vector<SkippedCell> skipped;
};

InfSupStudy infsup_study(const InfSupStudyConfig& cfg);

struct ExponentFit {
    InfSupKind kind;
    PatchKind patch;
    std::vector<int> k;
    std::vector<int> levels;    ///< level of the stabilized value used per k
    std::vector<double> values;
    double slope = 0.0;         ///< d log(value) / d log(k)
    double intercept = 0.0;
    double r2 = 0.0;
};

/// Least-squares fit of log(value) against log(k) using, per k, the value at
/// the largest computed level. Returns nullopt with fewer than two degrees.
std::optional<ExponentFit> fit_exponent(const std::vector<InfSupResult>& rows, InfSupKind kind, PatchKind patch);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

/// Ordinary least squares y ~ slope x + intercept; r2 = 1 for exact fits.
LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y);

} // namespace hexdg
