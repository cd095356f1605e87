#include "hexdg/assembly.hpp"
#include "hexdg/errors.hpp"
#include "hexdg/fem.hpp"
#include "hexdg/problems.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace hexdg;

namespace {

std::vector<double> random_vector(std::size_t n, unsigned seed)
{
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    std::vector<double> v(n);
    for (double& x : v)
        x = d(rng);
    return v;
}

double quad_form(const CsrMatrix& a, const std::vector<double>& x, const std::vector<double>& y)
{
    const std::vector<double> ay = a.multiply(y);
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        s += x[i] * ay[i];
    return s;
}

struct Fixture {
    GeometricMesh mesh;
    FaceSet faces;
    DofMap dofs;
    DGConfig cfg;
};

Fixture make(GeometricMesh mesh, int k, double theta = 1.0, double nu = 0.25)
{
    Fixture s;
    s.mesh = std::move(mesh);
    s.faces = extract_faces(s.mesh);
    s.dofs = build_dofmap(s.mesh, k);
    s.cfg.k = k;
    s.cfg.theta = theta;
    s.cfg.nu = nu;
    return s;
}

// Tensor Gauss rule on the rectangle of a face, independent of the library's
// face tables.
template <class F>
double integrate_face(const Face& f, int n, F&& fn)
{
    const GaussRule g = gauss_rule(n);
    const auto t = f.tangential_axes();
    double s = 0.0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            Point x{};
            x[f.axis] = f.plane;
            const double ha = 0.5 * (f.hi[0] - f.lo[0]);
            const double hb = 0.5 * (f.hi[1] - f.lo[1]);
            x[t[0]] = f.lo[0] + ha * (g.nodes[a] + 1.0);
            x[t[1]] = f.lo[1] + hb * (g.nodes[b] + 1.0);
            s += g.weights[a] * g.weights[b] * ha * hb * fn(x);
        }
    return s;
}

template <class F>
double integrate_box(const Box3& box, int n, F&& fn)
{
    const GaussRule g = gauss_rule(n);
    double s = 0.0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) {
                const Point xi{g.nodes[a], g.nodes[b], g.nodes[c]};
                s += g.weights[a] * g.weights[b] * g.weights[c] * fn(to_physical(box, xi));
            }
    return s * box.volume() / 8.0;
}

} // namespace

TEST(Assembly, ConstantFieldPenaltyEnergy)
{
    Fixture s = make(build_patch_mesh(PatchKind::Uniform, 0.5, 0), 1);
    const SystemBlocks blk = assemble_blocks(s.mesh, s.faces, s.dofs, s.cfg);
    const std::vector<double> ones(s.dofs.M, 1.0);
    EXPECT_NEAR(quad_form(blk.A, ones, ones), 180.0, 1e-11);
    EXPECT_NEAR(quad_form(blk.D, ones, ones), 180.0, 1e-11);
    EXPECT_NEAR(penalty(s.cfg, s.faces.faces[0]), 10.0, 1e-14);
}

TEST(Assembly, SymmetryAndThetaStructure)
{
    const GeometricMesh mesh = build_patch_mesh(PatchKind::Edge, 0.5, 2);
    Fixture s1 = make(mesh, 2, 1.0);
    const CsrMatrix A1 = assemble_A(s1.mesh, s1.faces, s1.dofs, s1.cfg);
    EXPECT_LE(asymmetry(A1), 1e-12 * A1.max_abs());
    EXPECT_LE(asymmetry(assemble_norm_matrices(s1.mesh, s1.faces, s1.dofs, s1.cfg).first), 1e-12 * A1.max_abs());

    Fixture s0 = make(mesh, 2, 0.0);
    Fixture sm = make(mesh, 2, -1.0);
    const Eigen::MatrixXd a0 = assemble_A(s0.mesh, s0.faces, s0.dofs, s0.cfg).to_dense();
    const Eigen::MatrixXd am = assemble_A(sm.mesh, sm.faces, sm.dofs, sm.cfg).to_dense();
    const Eigen::MatrixXd skew0 = a0 - a0.transpose();
    const Eigen::MatrixXd skewm = am - am.transpose();
    EXPECT_GT(skew0.cwiseAbs().maxCoeff(), 1e-3);
    EXPECT_LE((skewm - 2.0 * skew0).cwiseAbs().maxCoeff(), 1e-11 * a0.cwiseAbs().maxCoeff());
}

TEST(Assembly, ConstantPressureInKernelOfB)
{
    for (PatchKind kind : {PatchKind::Uniform, PatchKind::Edge, PatchKind::Corner, PatchKind::Fichera}) {
        Fixture s = make(build_patch_mesh(kind, 0.5, kind == PatchKind::Uniform ? 1 : 2), 2);
        const CsrMatrix B = assemble_B(s.mesh, s.faces, s.dofs, s.cfg);
        const std::vector<double> bq = B.multiply(constant_pressure(s.dofs));
        double worst = 0.0;
        for (double v : bq)
            worst = std::max(worst, std::abs(v));
        EXPECT_LE(worst, 1e-12 * B.max_abs()) << to_string(kind);
    }
}

TEST(Assembly, BilinearFormBMatchesQuadratureOracle)
{
    Fixture s = make(build_patch_mesh(PatchKind::Edge, 0.5, 2), 2);
    const CsrMatrix B = assemble_B(s.mesh, s.faces, s.dofs, s.cfg);
    DiscreteField field{s.mesh, s.dofs, random_vector(s.dofs.M, 11), random_vector(s.dofs.N, 12)};
    const double matrix_value = quad_form(B, field.velocity, field.pressure);

    const int n = 6;
    double oracle = 0.0;
    for (std::size_t e = 0; e < s.mesh.size(); ++e)
        oracle -= integrate_box(s.mesh.box(e), n, [&](const Point& x) {
            const FieldValue v = evaluate_in_element(field, e, x);
            return v.p * (v.grad_u[0][0] + v.grad_u[1][1] + v.grad_u[2][2]);
        });
    for (const Face& f : s.faces.faces) {
        if (f.interior()) {
            oracle += integrate_face(f, n, [&](const Point& x) {
                const FieldValue a = evaluate_in_element(field, f.owners[0], x);
                const FieldValue b = evaluate_in_element(field, f.owners[1], x);
                return 0.5 * (a.p + b.p) * (a.u[f.axis] - b.u[f.axis]);
            });
        } else {
            oracle += integrate_face(f, n, [&](const Point& x) {
                const FieldValue a = evaluate_in_element(field, f.owners[0], x);
                return a.p * a.u[f.axis] * f.normal_sign;
            });
        }
    }
    EXPECT_NEAR(matrix_value, oracle, 1e-12 * std::max(1.0, std::abs(oracle)));
}

TEST(Assembly, ContinuousLinearFieldOnTwoElements)
{
    Fixture s = make(mesh_from_boxes({Box3{{0, 0, 0}, {1, 1, 1}}, Box3{{1, 0, 0}, {2, 1, 1}}}), 1);
    const CsrMatrix A = assemble_A(s.mesh, s.faces, s.dofs, s.cfg);
    const double G[3][3] = {{1, 2, 0}, {0, 1, -1}, {3, 0, 1}};
    const VectorField u = [&](const Point& x) {
        Vec3 r{};
        for (int i = 0; i < 3; ++i)
            r[i] = G[i][0] * x[0] + G[i][1] * x[1] + G[i][2] * x[2] + 0.5 * i;
        return r;
    };
    const std::vector<double> uh = interpolate_velocity(s.mesh, s.dofs, u);

    // broken H1 part: |G|^2 vol
    double g2 = 0.0;
    for (auto& row : G)
        for (double v : row)
            g2 += v * v;
    double oracle = 2.0 * g2;
    // boundary of [0,2]x[0,1]^2: -(1 + theta) (grad u n).u + c |u|^2, every h_perp = 1
    const double c = s.cfg.gamma * 1.0;
    const Box3 dom{{0, 0, 0}, {2, 1, 1}};
    for (int axis = 0; axis < 3; ++axis)
        for (int side = 0; side < 2; ++side) {
            Face f;
            f.axis = axis;
            f.plane = side ? dom.hi[axis] : dom.lo[axis];
            const auto t = f.tangential_axes();
            f.lo = {dom.lo[t[0]], dom.lo[t[1]]};
            f.hi = {dom.hi[t[0]], dom.hi[t[1]]};
            const double sign = side ? 1.0 : -1.0;
            oracle += integrate_face(f, 3, [&](const Point& x) {
                const Vec3 v = u(x);
                double gn_u = 0.0, uu = 0.0;
                for (int i = 0; i < 3; ++i) {
                    gn_u += G[i][axis] * sign * v[i];
                    uu += v[i] * v[i];
                }
                return -2.0 * gn_u + c * uu;
            });
        }
    EXPECT_NEAR(quad_form(A, uh, uh), oracle, 1e-10 * oracle);
}

TEST(Assembly, CoercivityOnRandomVectors)
{
    Fixture s = make(build_patch_mesh(PatchKind::Corner, 0.5, 1), 2);
    const auto [D, E] = assemble_norm_matrices(s.mesh, s.faces, s.dofs, s.cfg);
    const CsrMatrix A = assemble_A(s.mesh, s.faces, s.dofs, s.cfg);
    double worst = 1e300;
    for (unsigned t = 0; t < 200; ++t) {
        const std::vector<double> v = random_vector(s.dofs.M, 100 + t);
        worst = std::min(worst, quad_form(A, v, v) / quad_form(D, v, v));
    }
    EXPECT_GT(worst, 0.1);
}

TEST(Assembly, PressureMassAndC)
{
    Fixture s = make(build_patch_mesh(PatchKind::Edge, 0.5, 1), 2, 1.0, 0.25);
    const CsrMatrix E = assemble_norm_matrices(s.mesh, s.faces, s.dofs, s.cfg).second;
    const std::vector<double> one = constant_pressure(s.dofs);
    EXPECT_NEAR(quad_form(E, one, one), 1.0, 1e-13);

    const Eigen::MatrixXd e = E.to_dense();
    EXPECT_LE((assemble_C(s.mesh, s.dofs, s.cfg).to_dense() - 0.5 * e).cwiseAbs().maxCoeff(), 1e-15);
    s.cfg.nu = 0.375;
    EXPECT_LE((assemble_C(s.mesh, s.dofs, s.cfg).to_dense() - 0.25 * e).cwiseAbs().maxCoeff(), 1e-15);
    s.cfg.nu = 0.5;
    EXPECT_EQ(assemble_C(s.mesh, s.dofs, s.cfg).to_dense().cwiseAbs().maxCoeff(), 0.0);

    const SystemBlocks blk = assemble_blocks(s.mesh, s.faces, s.dofs, s.cfg);
    double msum = 0.0;
    for (double v : blk.m)
        msum += v;
    EXPECT_NEAR(msum, 1.0, 1e-13);
    EXPECT_NEAR(blk.volume, 1.0, 1e-14);
}

TEST(Assembly, AugmentedLayout)
{
    Fixture s = make(build_patch_mesh(PatchKind::Uniform, 0.5, 0), 1);
    const SystemBlocks blk = assemble_blocks(s.mesh, s.faces, s.dofs, s.cfg);
    const CsrMatrix aug = assemble_augmented(blk);
    const std::size_t M = s.dofs.M, N = s.dofs.N;
    ASSERT_EQ(aug.rows, M + N + 1);
    for (std::size_t i = 0; i < M; ++i)
        for (std::size_t j = 0; j < N; ++j) {
            EXPECT_DOUBLE_EQ(aug.coeff(i, M + j), blk.B.coeff(i, j));
            EXPECT_DOUBLE_EQ(aug.coeff(M + j, i), -blk.B.coeff(i, j));
        }
    EXPECT_DOUBLE_EQ(aug.coeff(M + N, M + N), -1.0);
    EXPECT_DOUBLE_EQ(aug.coeff(M, M + N), -blk.m[0]);
    EXPECT_DOUBLE_EQ(aug.coeff(M + N, M), blk.m[0] / blk.volume);
}

// With g.n != 0 on the boundary the pressure lifting enters the solution;
// u = ((x-1/2)^2, 0, 0), p = -2 (x - 1/2) / (1 - 2 nu) is exactly representable
// at k = 2, so a correctly signed right-hand side reproduces it.
TEST(Assembly, BoundaryLiftingSignIsConsistent)
{
    const double nu = 0.25;
    const double kappa = 1.0 / (1.0 - 2.0 * nu);
    const VectorField u = [](const Point& x) { return Vec3{(x[0] - 0.5) * (x[0] - 0.5), 0.0, 0.0}; };
    const VectorField f = [&](const Point&) { return Vec3{-2.0 - 2.0 * kappa, 0.0, 0.0}; };
    RunSettings rs;
    rs.dg.k = 2;
    rs.dg.nu = nu;
    const GeometricMesh mesh = build_patch_mesh(PatchKind::Uniform, 0.5, 1);
    const Solution sol = solve_system(mesh, f, u, rs);

    ExactData exact;
    exact.g = u;
    exact.eval = [&](const Point& x) {
        FieldValue v;
        v.u = u(x);
        v.grad_u[0][0] = 2.0 * (x[0] - 0.5);
        v.p = -2.0 * kappa * (x[0] - 0.5);
        return v;
    };
    EXPECT_LE(dg_error(sol.field, exact, rs.dg).dg_error, 1e-8);
    EXPECT_LE(std::abs(sol.multiplier), 1e-10);

    // the pressure block itself: -int_{F_B} q g.n
    const FaceSet faces = extract_faces(mesh);
    const DofMap dofs = build_dofmap(mesh, 2);
    const std::vector<double> rhs = assemble_rhs(mesh, faces, dofs, rs.dg, f, u);
    const std::vector<double> one = constant_pressure(dofs);
    double lifted = 0.0;
    for (std::size_t j = 0; j < dofs.N; ++j)
        lifted += one[j] * rhs[dofs.M + j];
    // -(int_{x=1} 1/4 - int_{x=0} 1/4) = 0; weight q by x instead
    EXPECT_NEAR(lifted, 0.0, 1e-13);
    const std::vector<double> qx = interpolate_pressure(mesh, dofs, [](const Point& x) { return x[0]; });
    double weighted = 0.0;
    for (std::size_t j = 0; j < dofs.N; ++j)
        weighted += qx[j] * rhs[dofs.M + j];
    EXPECT_NEAR(weighted, -0.25, 1e-13);
}

TEST(Assembly, InvalidConfig)
{
    DGConfig c;
    c.gamma = -1.0;
    EXPECT_THROW(c.validate(), ConfigError);
    c = DGConfig{};
    c.nu = 0.6;
    EXPECT_THROW(c.validate(), ConfigError);
}
