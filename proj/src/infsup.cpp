#include "hexdg/infsup.hpp"

#include "hexdg/errors.hpp"
#include "hexdg/spaces.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <sstream>
#include <tuple>

namespace hexdg {

std::string_view to_string(InfSupKind k) { return k == InfSupKind::GammaB ? "gammaB" : "gammaA"; }

InfSupKind parse_infsup_kind(std::string_view s)
{
    std::string t;
    for (char c : s)
        if (c != '_' && c != '-')
            t += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (t == "gammab" || t == "b")
        return InfSupKind::GammaB;
    if (t == "gammaa" || t == "a")
        return InfSupKind::GammaA;
    throw ConfigError("unknown inf-sup kind '" + std::string(s) + "' (expected gammaB|gammaA)");
}

void check_kernel(const Eigen::VectorXd& sv, double tol, std::string_view what)
{
    const Eigen::Index n = sv.size();
    if (n < 2)
        throw InvariantError(std::string(what) + ": fewer than two singular values");
    const double s1 = sv(0);
    const double kernel = sv(n - 1);
    const double value = sv(n - 2);
    if (!(kernel <= tol * s1)) {
        std::ostringstream os;
        os << what << ": no kernel (sigma_min/sigma_1 = " << kernel / s1 << ")";
        throw InvariantError(os.str());
    }
    if (!(value > tol * s1)) {
        std::ostringstream os;
        os << what << ": kernel dimension > 1 (sigma_{n-1}/sigma_1 = " << value / s1 << ")";
        throw InvariantError(os.str());
    }
}

Eigen::VectorXd gamma_B_spectrum(const Eigen::MatrixXd& B, const Eigen::MatrixXd& D, const Eigen::MatrixXd& E)
{
    const Eigen::MatrixXd y = cholesky_congruence(E, cholesky_congruence(D, B, Side::Left), Side::Right);
    if (y.rows() <= y.cols())
        return singular_values(y, static_cast<std::size_t>(std::max(y.rows(), y.cols())));
    // Reduce the tall M x N matrix to its N x N triangular factor first.
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(y);
    const Eigen::MatrixXd r = qr.matrixQR().topRows(y.cols()).triangularView<Eigen::Upper>();
    return singular_values(r, static_cast<std::size_t>(r.rows()));
}

namespace {

Eigen::MatrixXd full_gram(const Eigen::MatrixXd& D, const Eigen::MatrixXd& E, double nu)
{
    const Eigen::Index m = D.rows();
    const Eigen::Index n = E.rows();
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(m + n, m + n);
    g.topLeftCorner(m, m) = D;
    g.bottomRightCorner(n, n) = (2.0 - 2.0 * nu) * E;
    return g;
}

struct Assembled {
    GeometricMesh const* mesh;
    DofMap dofs;
    SystemBlocks blocks;
};

Assembled assemble_for_infsup(const GeometricMesh& mesh, int k, const InfSupConfig& cfg, bool full)
{
    Assembled a{&mesh, build_dofmap(mesh, k), {}};
    if (a.dofs.M + a.dofs.N > cfg.dense_cap) {
        std::ostringstream os;
        os << "M+N = " << a.dofs.M + a.dofs.N << " exceeds the dense cap " << cfg.dense_cap
           << "; use fewer levels or a lower degree";
        throw ConfigError(os.str());
    }
    if (a.dofs.N < 2)
        throw ConfigError("inf-sup constant needs at least two pressure dofs (N = 1 leaves an empty quotient space)");
    DGConfig dg;
    dg.k = k;
    dg.theta = cfg.theta;
    dg.gamma = cfg.gamma;
    dg.nu = 0.5;
    const FaceSet faces = extract_faces(mesh);
    BlockSelection sel{full, true, full, true, true};
    a.blocks = assemble_blocks(mesh, faces, a.dofs, dg, sel);
    return a;
}

InfSupResult make_result(InfSupKind kind, const GeometricMesh& mesh, int k, const DofMap& dofs)
{
    InfSupResult r;
    r.kind = kind;
    r.patch = mesh.kind;
    r.sigma = mesh.sigma;
    r.levels = mesh.levels;
    r.k = k;
    r.M = dofs.M;
    r.N = dofs.N;
    return r;
}

void fill_values(InfSupResult& r, Eigen::VectorXd sv, double tol)
{
    check_kernel(sv, tol, to_string(r.kind));
    const Eigen::Index n = sv.size();
    r.sigma_max = sv(0);
    r.sigma_kernel = sv(n - 1);
    r.value = sv(n - 2);
    r.singular_values = std::move(sv);
}

} // namespace

Eigen::VectorXd gamma_a_spectrum(const Eigen::MatrixXd& saddle, const Eigen::MatrixXd& D, const Eigen::MatrixXd& E,
                                 double nu)
{
    const Eigen::MatrixXd mt = cholesky_congruence(full_gram(D, E, nu), saddle, Side::Both);
    return singular_values(mt, static_cast<std::size_t>(mt.rows()));
}

InfSupResult gamma_B(const GeometricMesh& mesh, int k, const InfSupConfig& cfg)
{
    const auto t0 = std::chrono::steady_clock::now();
    Assembled a = assemble_for_infsup(mesh, k, cfg, false);
    InfSupResult r = make_result(InfSupKind::GammaB, mesh, k, a.dofs);
    fill_values(r, gamma_B_spectrum(a.blocks.B.to_dense(), a.blocks.D.to_dense(), a.blocks.E.to_dense()),
                cfg.kernel_tol);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

InfSupResult gamma_a(const GeometricMesh& mesh, int k, const InfSupConfig& cfg)
{
    const auto t0 = std::chrono::steady_clock::now();
    Assembled a = assemble_for_infsup(mesh, k, cfg, true);
    InfSupResult r = make_result(InfSupKind::GammaA, mesh, k, a.dofs);
    Eigen::MatrixXd saddle = assemble_saddle(a.blocks).to_dense();
    Eigen::MatrixXd D = a.blocks.D.to_dense();
    Eigen::MatrixXd E = a.blocks.E.to_dense();
    a.blocks = SystemBlocks{};
    fill_values(r, gamma_a_spectrum(saddle, D, E, 0.5), cfg.kernel_tol);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

Eigen::VectorXd gamma_a_kernel_vector(const GeometricMesh& mesh, int k, const InfSupConfig& cfg)
{
    Assembled a = assemble_for_infsup(mesh, k, cfg, true);
    const Eigen::MatrixXd g = full_gram(a.blocks.D.to_dense(), a.blocks.E.to_dense(), 0.5);
    const Eigen::MatrixXd mt = cholesky_congruence(g, assemble_saddle(a.blocks).to_dense(), Side::Both);
    const Svd svd = dense_svd(mt, cfg.dense_cap);
    check_kernel(svd.sigma, cfg.kernel_tol, "gammaA");
    // M~ z = 0 with z = L^T x  =>  x = L^{-T} z is the kernel of the saddle matrix.
    Eigen::LLT<Eigen::MatrixXd> llt(g);
    Eigen::VectorXd x = llt.matrixU().solve(svd.V.col(svd.V.cols() - 1));
    const Eigen::Index i = [&] {
        Eigen::Index idx;
        x.cwiseAbs().maxCoeff(&idx);
        return idx;
    }();
    return x / x(i);
}

InfSupStudy infsup_study(const InfSupStudyConfig& cfg)
{
    InfSupStudy out;
    for (InfSupKind kind : cfg.kinds) {
        for (PatchKind patch : cfg.patches) {
            for (int k : cfg.degrees) {
                for (int l : cfg.levels) {
                    const GeometricMesh mesh = build_patch_mesh(patch, cfg.sigma, l);
                    const DofMap dofs = build_dofmap(mesh, k);
                    if (dofs.M + dofs.N > cfg.infsup.dense_cap) {
                        out.skipped.push_back({kind, patch, k, l, "dense cap"});
                        continue;
                    }
                    if (dofs.N < 2) {
                        out.skipped.push_back({kind, patch, k, l, "N < 2"});
                        continue;
                    }
                    out.rows.push_back(kind == InfSupKind::GammaB ? gamma_B(mesh, k, cfg.infsup)
                                                                  : gamma_a(mesh, k, cfg.infsup));
                }
            }
        }
    }
    std::stable_sort(out.rows.begin(), out.rows.end(), [](const InfSupResult& a, const InfSupResult& b) {
        return std::make_tuple(a.kind, a.patch, a.k, a.levels) < std::make_tuple(b.kind, b.patch, b.k, b.levels);
    });
    return out;
}

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size() || x.size() < 2)
        throw ConfigError("least squares needs at least two points");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0)
        throw ConfigError("least squares with identical abscissae");
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ssr = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double e = y[i] - (f.slope * x[i] + f.intercept);
        ssr += e * e;
    }
    f.r2 = syy == 0.0 ? 1.0 : 1.0 - ssr / syy;
    return f;
}

std::optional<ExponentFit> fit_exponent(const std::vector<InfSupResult>& rows, InfSupKind kind, PatchKind patch)
{
    std::map<int, const InfSupResult*> stabilized;
    for (const InfSupResult& r : rows) {
        if (r.kind != kind || r.patch != patch)
            continue;
        auto& slot = stabilized[r.k];
        if (slot == nullptr || r.levels > slot->levels)
            slot = &r;
    }
    if (stabilized.size() < 2)
        return std::nullopt;
    ExponentFit fit;
    fit.kind = kind;
    fit.patch = patch;
    std::vector<double> lx, ly;
    for (const auto& [k, r] : stabilized) {
        fit.k.push_back(k);
        fit.levels.push_back(r->levels);
        fit.values.push_back(r->value);
        lx.push_back(std::log(static_cast<double>(k)));
        ly.push_back(std::log(r->value));
    }
    const LineFit lf = least_squares(lx, ly);
    fit.slope = lf.slope;
    fit.intercept = lf.intercept;
    fit.r2 = lf.r2;
    return fit;
}

} // namespace hexdg
