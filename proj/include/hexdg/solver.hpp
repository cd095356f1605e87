#pragma once

// Linear algebra back ends: right-preconditioned restarted GMRES with ILU(0),
// dense SVD and Cholesky congruence transforms for the inf-sup pipeline.

#include "hexdg/errors.hpp"
#include "hexdg/sparse.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

namespace hexdg {

enum class Preconditioner { ILU0, None };

std::string_view to_string(Preconditioner p);
Preconditioner parse_preconditioner(std::string_view s);

struct SolveConfig {
    double tol = 1e-12;  ///< on ||b - A x||_2, unpreconditioned, absolute
    int max_iter = 20000;
    int restart = 200;
    Preconditioner preconditioner = Preconditioner::ILU0;
    std::ostream* log = nullptr; ///< JSON lines {"iteration":i,"residual":r}

    void validate() const;
};

struct SolveReport {
    int iterations = 0;
    int restarts = 0;
    double residual = 0.0; ///< true residual of the returned iterate
    double rhs_norm = 0.0;
    bool converged = false;
    Preconditioner used = Preconditioner::None;
    bool ilu_fallback = false; ///< ILU(0) hit a zero pivot, ran unpreconditioned
    double setup_seconds = 0.0;
    double solve_seconds = 0.0;
};

/// Non-convergence; carries the iterate with the smallest true residual.
class GmresError : public SolverError {
public:
    GmresError(const std::string& what, std::vector<double> best, SolveReport report)
        : SolverError(what), best_(std::move(best)), report_(report)
    {
    }
    const std::vector<double>& best() const { return best_; }
    const SolveReport& report() const { return report_; }

private:
    std::vector<double> best_;
    SolveReport report_;
};

/// Incomplete LU without fill on the pattern of A. Throws SolverError on a
/// zero or non-finite pivot.
class Ilu0 {
public:
    explicit Ilu0(const CsrMatrix& a);
    /// out = (LU)^{-1} in
    void apply(std::span<const double> in, std::span<double> out) const;

private:
    CsrMatrix lu_;
    std::vector<std::int64_t> diag_;
};

struct SolveResult {
    std::vector<double> x;
    SolveReport report;
};

/// Throws GmresError when the tolerance is not met within max_iter.
SolveResult gmres_solve(const CsrMatrix& a, std::span<const double> b, const SolveConfig& cfg);

double residual_norm(const CsrMatrix& a, std::span<const double> x, std::span<const double> b);

// ---- dense ----

struct Svd {
    Eigen::MatrixXd U;
    Eigen::VectorXd sigma; ///< non-increasing
    Eigen::MatrixXd V;
};

inline constexpr std::size_t default_dense_cap = 6000;

/// Thin SVD. Throws ConfigError when max(rows, cols) exceeds the cap.
Svd dense_svd(const Eigen::MatrixXd& m, std::size_t cap = default_dense_cap);
Eigen::VectorXd singular_values(const Eigen::MatrixXd& m, std::size_t cap = default_dense_cap);

enum class Side { Left, Right, Both };

/// With G = L L^T: Left -> L^{-1} X, Right -> X L^{-T}, Both -> L^{-1} X L^{-T}.
/// Throws InvariantError when G is not symmetric positive definite.
Eigen::MatrixXd cholesky_congruence(const Eigen::MatrixXd& g, const Eigen::MatrixXd& x, Side side);

/// L^{-1} X for a sparse SPD G = P^T L L^T P (fill-reducing permutation P is
/// absorbed into the factor, which leaves singular values unchanged).
Eigen::MatrixXd sparse_cholesky_left(const CsrMatrix& g, const Eigen::MatrixXd& x);

} // namespace hexdg
