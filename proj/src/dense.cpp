#include "hexdg/solver.hpp"

#include <Eigen/Cholesky>
#include <Eigen/SVD>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <string>

namespace hexdg {

namespace {

void check_cap(const Eigen::MatrixXd& m, std::size_t cap)
{
    const auto d = static_cast<std::size_t>(std::max(m.rows(), m.cols()));
    if (d > cap)
        throw ConfigError("dense SVD of a " + std::to_string(m.rows()) + "x" + std::to_string(m.cols())
                          + " matrix exceeds the dense cap " + std::to_string(cap)
                          + "; use fewer levels or a lower degree");
}

} // namespace

Svd dense_svd(const Eigen::MatrixXd& m, std::size_t cap)
{
    check_cap(m, cap);
    Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

Eigen::VectorXd singular_values(const Eigen::MatrixXd& m, std::size_t cap)
{
    check_cap(m, cap);
    Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
    return svd.singularValues();
}

Eigen::MatrixXd cholesky_congruence(const Eigen::MatrixXd& g, const Eigen::MatrixXd& x, Side side)
{
    if (g.rows() != g.cols())
        throw ConfigError("Gram matrix must be square");
    Eigen::LLT<Eigen::MatrixXd> llt(g);
    if (llt.info() != Eigen::Success)
        throw InvariantError("Cholesky factorization failed: Gram matrix is not positive definite");
    const auto L = llt.matrixL();
    switch (side) {
    case Side::Left:
        return L.solve(x);
    case Side::Right:
        // X L^{-T} = (L^{-1} X^T)^T
        return L.solve(x.transpose()).transpose();
    case Side::Both: {
        Eigen::MatrixXd t = L.solve(x);
        return L.solve(t.transpose()).transpose();
    }
    }
    return x;
}

Eigen::MatrixXd sparse_cholesky_left(const CsrMatrix& g, const Eigen::MatrixXd& x)
{
    if (g.rows != g.cols || static_cast<Eigen::Index>(g.rows) != x.rows())
        throw ConfigError("sparse Cholesky: dimension mismatch");
    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(g.to_eigen());
    if (llt.info() != Eigen::Success)
        throw InvariantError("sparse Cholesky failed: Gram matrix is not positive definite");
    // G = P^T L L^T P, so (P^T L)^{-1} X = L^{-1} P X.
    Eigen::MatrixXd px = llt.permutationP() * x;
    return llt.matrixL().solve(px);
}

} // namespace hexdg
