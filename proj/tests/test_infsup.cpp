#include "hexdg/assembly.hpp"
#include "hexdg/errors.hpp"
#include "hexdg/infsup.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <cmath>

using namespace hexdg;

namespace {

Eigen::MatrixXd inv_sqrt(const Eigen::MatrixXd& g)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g);
    return eig.eigenvectors() * eig.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
           eig.eigenvectors().transpose();
}

// sqrt of the second-smallest eigenvalue of E^{-1/2} B^T D^{-1} B E^{-1/2}
double gamma_B_oracle(const GeometricMesh& mesh, int k)
{
    const FaceSet faces = extract_faces(mesh);
    const DofMap dofs = build_dofmap(mesh, k);
    DGConfig cfg;
    cfg.k = k;
    const SystemBlocks blk = assemble_blocks(mesh, faces, dofs, cfg);
    const Eigen::MatrixXd B = blk.B.to_dense();
    const Eigen::MatrixXd Ei = inv_sqrt(blk.E.to_dense());
    const Eigen::MatrixXd S = Ei * B.transpose() * blk.D.to_dense().ldlt().solve(B) * Ei;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (S + S.transpose()));
    return std::sqrt(eig.eigenvalues()[1]);
}

} // namespace

TEST(InfSup, GammaBMatchesEigenOracle)
{
    const GeometricMesh one = build_patch_mesh(PatchKind::Uniform, 0.5, 0);
    const InfSupResult r = gamma_B(one, 2);
    EXPECT_GT(r.value, 0.0);
    EXPECT_NEAR(r.value, gamma_B_oracle(one, 2), 1e-8 * r.value);
    EXPECT_LE(r.sigma_kernel, 1e-10 * r.sigma_max);
    EXPECT_EQ(r.singular_values.size(), static_cast<Eigen::Index>(r.N));

    const GeometricMesh edge = build_patch_mesh(PatchKind::Edge, 0.5, 1);
    const InfSupResult e = gamma_B(edge, 2);
    EXPECT_NEAR(e.value, gamma_B_oracle(edge, 2), 1e-8 * e.value);
}

TEST(InfSup, ScaleInvariance)
{
    const InfSupResult unit = gamma_B(mesh_from_boxes({Box3{{0, 0, 0}, {1, 1, 1}}}), 2);
    const InfSupResult big = gamma_B(mesh_from_boxes({Box3{{-3, -3, -3}, {1, 1, 1}}}), 2);
    EXPECT_NEAR(unit.value, big.value, 1e-10 * unit.value);
    const InfSupResult a1 = gamma_a(mesh_from_boxes({Box3{{0, 0, 0}, {1, 1, 1}}}), 2);
    const InfSupResult a2 = gamma_a(mesh_from_boxes({Box3{{0, 0, 0}, {0.25, 0.25, 0.25}}}), 2);
    EXPECT_NEAR(a1.value, a2.value, 1e-9 * a1.value);
}

TEST(InfSup, GammaAKernelIsConstantPressure)
{
    const GeometricMesh mesh = build_patch_mesh(PatchKind::Uniform, 0.5, 0);
    const Eigen::VectorXd v = gamma_a_kernel_vector(mesh, 2);
    const DofMap dofs = build_dofmap(mesh, 2);
    ASSERT_EQ(v.size(), static_cast<Eigen::Index>(dofs.M + dofs.N));
    EXPECT_LE(v.head(dofs.M).cwiseAbs().maxCoeff(), 1e-8);
    const Eigen::VectorXd p = v.tail(dofs.N);
    for (Eigen::Index i = 0; i < p.size(); ++i)
        EXPECT_NEAR(std::abs(p[i]), 1.0, 1e-8);
    EXPECT_GT(p.minCoeff() * p.maxCoeff(), 0.0);

    const InfSupResult r = gamma_a(mesh, 2);
    EXPECT_GT(r.value, 0.0);
    EXPECT_LE(r.sigma_kernel, 1e-10 * r.sigma_max);
}

TEST(InfSup, KernelCheckAndSmallSpaces)
{
    Eigen::VectorXd ok(3);
    ok << 2.0, 0.5, 1e-14;
    EXPECT_NO_THROW(check_kernel(ok, 1e-10, "ok"));
    Eigen::VectorXd no_kernel(3);
    no_kernel << 2.0, 0.5, 0.1;
    EXPECT_THROW(check_kernel(no_kernel, 1e-10, "x"), InvariantError);
    Eigen::VectorXd double_kernel(3);
    double_kernel << 2.0, 1e-13, 1e-14;
    EXPECT_THROW(check_kernel(double_kernel, 1e-10, "x"), InvariantError);

    // k = 1 on one element: N = 1, no quotient space
    EXPECT_THROW(gamma_B(build_patch_mesh(PatchKind::Uniform, 0.5, 0), 1), ConfigError);
    InfSupConfig tiny;
    tiny.dense_cap = 50;
    EXPECT_THROW(gamma_B(build_patch_mesh(PatchKind::Uniform, 0.5, 0), 2, tiny), ConfigError);
}

TEST(InfSup, StudySkipsAndSorts)
{
    InfSupStudyConfig sc;
    sc.kinds = {InfSupKind::GammaB};
    sc.patches = {PatchKind::Edge};
    sc.degrees = {2, 1};
    sc.levels = {1, 0};
    sc.infsup.dense_cap = 300;
    const InfSupStudy st = infsup_study(sc);
    // (k=1, l=0) has N = 1; (k=2, l=1) exceeds the cap
    ASSERT_FALSE(st.rows.empty());
    for (std::size_t i = 1; i < st.rows.size(); ++i)
        EXPECT_TRUE(std::make_pair(st.rows[i - 1].k, st.rows[i - 1].levels) <
                    std::make_pair(st.rows[i].k, st.rows[i].levels));
    EXPECT_EQ(st.rows.size() + st.skipped.size(), 4u);
    EXPECT_GE(st.skipped.size(), 2u);
}

TEST(InfSup, FitsAndLeastSquares)
{
    const LineFit f = least_squares({1, 2, 3}, {3, 5, 7});
    EXPECT_NEAR(f.slope, 2.0, 1e-14);
    EXPECT_NEAR(f.intercept, 1.0, 1e-14);
    EXPECT_NEAR(f.r2, 1.0, 1e-14);

    std::vector<InfSupResult> rows;
    for (int k : {2, 3, 4})
        for (int l : {1, 2}) {
            InfSupResult r;
            r.kind = InfSupKind::GammaB;
            r.patch = PatchKind::Edge;
            r.k = k;
            r.levels = l;
            r.value = (l == 2 ? 1.0 : 5.0) * std::pow(k, -0.5);
            rows.push_back(r);
        }
    const auto fit = fit_exponent(rows, InfSupKind::GammaB, PatchKind::Edge);
    ASSERT_TRUE(fit.has_value());
    EXPECT_NEAR(fit->slope, -0.5, 1e-12);
    EXPECT_EQ(fit->levels, (std::vector<int>{2, 2, 2}));
    EXPECT_FALSE(fit_exponent(rows, InfSupKind::GammaA, PatchKind::Edge).has_value());

    EXPECT_EQ(parse_infsup_kind("gammaA"), InfSupKind::GammaA);
    EXPECT_THROW(parse_infsup_kind("gammaC"), ConfigError);
}
