#include "hexdg/errors.hpp"
#include "hexdg/fem.hpp"
#include "hexdg/problems.hpp"
#include "hexdg/study.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace hexdg;

namespace {

Point random_point(std::mt19937& rng, const ExactCase& c, double min_dist)
{
    std::uniform_real_distribution<double> d(0.0, 1.0);
    for (;;) {
        const Point x{d(rng), d(rng), d(rng)};
        if (c.singular_distance(x) >= min_dist)
            return x;
    }
}

// -Lap u + grad p by second-order central differences of the closed forms
Vec3 fd_forcing(const ExactCase& c, double nu, const Point& x, double h)
{
    Vec3 out{};
    const Vec3 u0 = c.u(x);
    for (int d = 0; d < 3; ++d) {
        Point xp = x, xm = x;
        xp[d] += h;
        xm[d] -= h;
        const Vec3 up = c.u(xp), um = c.u(xm);
        for (int i = 0; i < 3; ++i)
            out[i] -= (up[i] - 2.0 * u0[i] + um[i]) / (h * h);
        out[d] += (c.p(xp, nu) - c.p(xm, nu)) / (2.0 * h);
    }
    return out;
}

double norm(const Vec3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

} // namespace

TEST(Catalog, LookupAndNuRestrictions)
{
    EXPECT_EQ(catalog().size(), 6u);
    EXPECT_EQ(find_case("edgesing").name, "EdgeSing");
    EXPECT_THROW(find_case("nope"), ConfigError);
    EXPECT_THROW(find_case("EdgeSing").check_nu(0.5), ConfigError);
    EXPECT_THROW(find_case("PolyExact").check_nu(0.5), ConfigError);
    EXPECT_NO_THROW(find_case("SmoothDivFree").check_nu(0.5));
    EXPECT_THROW(find_case("SmoothDivFree").check_nu(0.0), ConfigError);
    EXPECT_THROW(find_case("SmoothDivFree").check_nu(0.6), ConfigError);
    EXPECT_FALSE(find_case("CircularForce").has_exact);
    EXPECT_EQ(find_case("CornerEdgeSing").patch(), PatchKind::CornerEdge);
    EXPECT_THROW(forcing(find_case("EdgeSing"), 0.25, {0.0, 0.0, 0.5}), ConfigError);
}

TEST(Catalog, ForcingMatchesFiniteDifferences)
{
    std::mt19937 rng(17);
    for (const ExactCase& c : catalog()) {
        if (!c.has_exact)
            continue;
        for (double nu : {0.125, 0.375, 0.5}) {
            if (nu == 0.5 && !c.allows_incompressible)
                continue;
            for (int t = 0; t < 20; ++t) {
                const Point x = random_point(rng, c, 0.1);
                const Vec3 f = c.f(x, nu);
                const Vec3 fd = fd_forcing(c, nu, x, 1e-4);
                EXPECT_LE(norm({f[0] - fd[0], f[1] - fd[1], f[2] - fd[2]}), 1e-5 * std::max(1.0, norm(f)))
                    << c.name << " nu=" << nu;
            }
        }
    }
}

TEST(Catalog, GradientsAndDivergence)
{
    std::mt19937 rng(23);
    const double h = 1e-6;
    for (const ExactCase& c : catalog()) {
        if (!c.has_exact)
            continue;
        for (int t = 0; t < 10; ++t) {
            const Point x = random_point(rng, c, 0.1);
            const Mat3 g = c.grad_u(x);
            for (int d = 0; d < 3; ++d) {
                Point xp = x, xm = x;
                xp[d] += h;
                xm[d] -= h;
                for (int i = 0; i < 3; ++i)
                    EXPECT_NEAR(g[i][d], (c.u(xp)[i] - c.u(xm)[i]) / (2 * h), 1e-6 * std::max(1.0, std::abs(g[i][d])))
                        << c.name;
            }
            // div u + (1 - 2 nu) p = 0
            const double div = g[0][0] + g[1][1] + g[2][2];
            if (c.name == "SmoothDivFree")
                EXPECT_NEAR(div, 0.0, 1e-12);
            else
                EXPECT_NEAR(div + 0.5 * c.p(x, 0.25), 0.0, 1e-10 * std::max(1.0, std::abs(div))) << c.name;
        }
    }
}

TEST(Catalog, SmoothDivFreeVanishesOnBoundary)
{
    const ExactCase& c = find_case("SmoothDivFree");
    std::mt19937 rng(29);
    std::uniform_real_distribution<double> d(0.0, 1.0);
    for (int t = 0; t < 50; ++t) {
        Point x{d(rng), d(rng), d(rng)};
        x[t % 3] = (t / 3) % 2;
        EXPECT_LE(norm(c.u(x)), 1e-14);
    }
}

TEST(Catalog, PolyExactPressureHasZeroMean)
{
    const ExactCase& c = find_case("PolyExact");
    const GaussRule g = gauss_rule(4);
    double mean = 0.0;
    for (int i = 0; i < 4; ++i)
        mean += 0.5 * g.weights[i] * c.p({0.5 * (g.nodes[i] + 1.0), 0.3, 0.3}, 0.25);
    EXPECT_NEAR(mean, 0.0, 1e-15);
}

TEST(Errors, ZeroSolutionAgainstSmoothDivFree)
{
    // u_h = 0, g = 0 on the boundary: dg_error^2 = ||grad u||^2
    const GeometricMesh mesh = build_patch_mesh(PatchKind::Uniform, 0.5, 1);
    DiscreteField zero{mesh, build_dofmap(mesh, 2), {}, {}};
    zero.velocity.assign(zero.dofs.M, 0.0);
    zero.pressure.assign(zero.dofs.N, 0.0);
    DGConfig dg;
    dg.k = 2;
    dg.nu = 0.5;
    dg.quad_overkill = 14;
    const ExactCase& c = find_case("SmoothDivFree");
    const ErrorResult r = dg_error(zero, exact_from_case(c, 0.5), dg);

    const GaussRule g = gauss_rule(16);
    double grad2 = 0.0;
    for (int a = 0; a < 16; ++a)
        for (int b = 0; b < 16; ++b)
            for (int q = 0; q < 16; ++q) {
                const Point x{0.5 * (g.nodes[a] + 1), 0.5 * (g.nodes[b] + 1), 0.5 * (g.nodes[q] + 1)};
                const Mat3 gr = c.grad_u(x);
                double s = 0.0;
                for (auto& row : gr)
                    for (double v : row)
                        s += v * v;
                grad2 += g.weights[a] * g.weights[b] * g.weights[q] / 8.0 * s;
            }
    EXPECT_NEAR(r.dg_error * r.dg_error, grad2, 1e-9 * grad2);
    EXPECT_EQ(r.N, zero.dofs.M + zero.dofs.N - 1);
}

TEST(Errors, InterpolantOfPolyExactIsExact)
{
    const GeometricMesh mesh = build_patch_mesh(PatchKind::Edge, 0.5, 1);
    const DofMap dofs = build_dofmap(mesh, 2);
    const ExactCase& c = find_case("PolyExact");
    const DiscreteField f{mesh, dofs, interpolate_velocity(mesh, dofs, c.u),
                          interpolate_pressure(mesh, dofs, [&](const Point& x) { return c.p(x, 0.25); })};
    DGConfig dg;
    dg.k = 2;
    EXPECT_LE(dg_error(f, exact_from_case(c, 0.25), dg).dg_error, 1e-12);
}

TEST(Solve, GalerkinExactAndZeroData)
{
    RunSettings rs;
    rs.dg.k = 2;
    rs.dg.nu = 0.375;
    const GeometricMesh mesh = build_patch_mesh(PatchKind::Uniform, 0.5, 1);
    const ExactCase& c = find_case("PolyExact");
    const Solution sol = solve_case(mesh, c, rs);
    EXPECT_LE(dg_error(sol.field, exact_from_case(c, rs.dg.nu), rs.dg).dg_error, 1e-8);
    EXPECT_LE(std::abs(sol.multiplier), 1e-10);
    EXPECT_LE(std::abs(sol.pressure_mean), 1e-10);
    EXPECT_TRUE(sol.report.converged);

    const VectorField zero = [](const Point&) { return Vec3{}; };
    const Solution z = solve_system(mesh, zero, zero, rs);
    for (double v : z.field.velocity)
        EXPECT_EQ(v, 0.0);
    EXPECT_EQ(z.multiplier, 0.0);
}

TEST(Reference, LowestIndexOwnsSharedPoints)
{
    const GeometricMesh mesh = mesh_from_boxes({Box3{{1, 0, 0}, {2, 1, 1}}, Box3{{0, 0, 0}, {1, 1, 1}}});
    const DofMap dofs = build_dofmap(mesh, 1);
    DiscreteField f{mesh, dofs, std::vector<double>(dofs.M, 0.0), std::vector<double>(dofs.N, 0.0)};
    // element 0 carries u = (1,1,1), element 1 carries u = (2,2,2)
    for (std::size_t i = 0; i < dofs.vel_element; ++i) {
        f.velocity[dofs.velocity_offset(0) + i] = 1.0;
        f.velocity[dofs.velocity_offset(1) + i] = 2.0;
    }
    const ReferenceSolution ref(f);
    EXPECT_EQ(ref.locate({1.0, 0.5, 0.5}), 0u);
    EXPECT_NEAR(ref.evaluate({1.0, 0.5, 0.5}).u[0], 1.0, 1e-14);
    EXPECT_NEAR(ref.evaluate({0.5, 0.5, 0.5}).u[1], 2.0, 1e-14);
    EXPECT_NEAR(ref.evaluate({1.5, 0.2, 0.9}).u[2], 1.0, 1e-14);
    EXPECT_THROW(ref.evaluate({2.5, 0.5, 0.5}), ConfigError);
}

TEST(Study, RateRootsAndMeshes)
{
    EXPECT_EQ(rate_root(find_case("EdgeSing"), SweepMode::Levels), 4);
    EXPECT_EQ(rate_root(find_case("CornerSing"), SweepMode::Levels), 4);
    EXPECT_EQ(rate_root(find_case("CornerEdgeSing"), SweepMode::Levels), 5);
    EXPECT_EQ(rate_root(find_case("SmoothDivFree"), SweepMode::Degrees), 3);
    EXPECT_EQ(study_mesh(find_case("EdgeSing"), 0.5, 3).size(), 10u);

    std::vector<ConvergenceRow> rows;
    for (int l = 0; l <= 4; ++l) {
        ConvergenceRow r;
        r.nu = 0.375;
        r.levels = l;
        r.k = l + 1;
        r.N = static_cast<std::size_t>(std::pow(2.0 + l, 4));
        r.dg_error = std::exp(-0.7 * (2.0 + l) + 1.0);
        rows.push_back(r);
    }
    const std::vector<RateFit> fits = fit_rates(rows, 4, SweepMode::Levels, 2);
    ASSERT_EQ(fits.size(), 1u);
    EXPECT_EQ(fits[0].points, 3u);
    EXPECT_NEAR(fits[0].slope, -0.7, 1e-12);
    EXPECT_NEAR(fits[0].r2, 1.0, 1e-12);
}
