#include "hexdg/errors.hpp"
#include "hexdg/fem.hpp"
#include "hexdg/spaces.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

using namespace hexdg;

TEST(Gauss, LowOrderRules)
{
    const GaussRule g1 = gauss_rule(1);
    ASSERT_EQ(g1.nodes.size(), 1u);
    EXPECT_NEAR(g1.nodes[0], 0.0, 1e-15);
    EXPECT_NEAR(g1.weights[0], 2.0, 1e-15);

    const GaussRule g2 = gauss_rule(2);
    EXPECT_NEAR(g2.nodes[0], -1.0 / std::sqrt(3.0), 1e-15);
    EXPECT_NEAR(g2.nodes[1], 1.0 / std::sqrt(3.0), 1e-15);

    const GaussRule g3 = gauss_rule(3);
    double x4 = 0.0;
    for (int i = 0; i < 3; ++i)
        x4 += g3.weights[i] * std::pow(g3.nodes[i], 4);
    EXPECT_NEAR(x4, 0.4, 1e-14);
}

TEST(Gauss, ExactnessAndSymmetry)
{
    for (int n : {1, 4, 9, 17, 33, 64}) {
        const GaussRule g = gauss_rule(n);
        EXPECT_NEAR(std::accumulate(g.weights.begin(), g.weights.end(), 0.0), 2.0, 1e-13) << n;
        for (int i = 0; i < n; ++i) {
            EXPECT_GT(g.weights[i], 0.0);
            EXPECT_NEAR(g.nodes[i], -g.nodes[n - 1 - i], 1e-14);
            if (i > 0)
                EXPECT_LT(g.nodes[i - 1], g.nodes[i]);
        }
        // x^{2n-2} integrates to 2/(2n-1)
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            s += g.weights[i] * std::pow(g.nodes[i], 2 * n - 2);
        EXPECT_NEAR(s, 2.0 / (2 * n - 1), 1e-13) << n;
    }
    EXPECT_THROW(gauss_rule(0), ConfigError);
    EXPECT_THROW(gauss_rule(65), ConfigError);
}

TEST(Basis, PartitionOfUnityAndCardinality)
{
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int p : {0, 1, 2, 5}) {
        const TensorBasis basis(p);
        std::vector<double> v(basis.size());
        std::vector<double> g0(basis.size()), g1(basis.size()), g2(basis.size());
        for (int t = 0; t < 20; ++t) {
            const Point xi{u(rng), u(rng), u(rng)};
            basis.values_and_gradients_at(xi, v, {g0, g1, g2});
            EXPECT_NEAR(std::accumulate(v.begin(), v.end(), 0.0), 1.0, 1e-12);
            EXPECT_NEAR(std::accumulate(g0.begin(), g0.end(), 0.0), 0.0, 1e-10);
            EXPECT_NEAR(std::accumulate(g2.begin(), g2.end(), 0.0), 0.0, 1e-10);
        }
        // nodal: phi_b(x_b') = delta
        const auto& nodes = basis.basis1d().nodes();
        const int n = p + 1;
        for (int b = 0; b < static_cast<int>(basis.size()); ++b) {
            const Point xi{nodes[b % n], nodes[(b / n) % n], nodes[b / (n * n)]};
            basis.values_at(xi, v);
            for (int c = 0; c < static_cast<int>(basis.size()); ++c)
                EXPECT_NEAR(v[c], b == c ? 1.0 : 0.0, 1e-12);
        }
    }
}

TEST(Basis, DerivativeMatchesFiniteDifference)
{
    const LagrangeBasis1D b(gauss_rule(5).nodes);
    const double h = 1e-6;
    for (int i = 0; i < 5; ++i)
        for (double x : {-0.9, -0.2, 0.35, 0.8}) {
            const double fd = (b.value(i, x + h) - b.value(i, x - h)) / (2 * h);
            EXPECT_NEAR(b.derivative(i, x), fd, 1e-6);
        }
}

TEST(EvalBasis, WeightsAndIntegrals)
{
    const Box3 big{{-1, -1, -1}, {1, 1, 1}};
    const TensorBasis basis = TensorBasis::velocity(2);
    const EvalTable t = eval_basis(basis, big, gauss_rule(3));
    EXPECT_NEAR(std::accumulate(t.weights.begin(), t.weights.end(), 0.0), 8.0, 1e-13);

    // x^2 on the unit cube through the k=2 interpolant (exact for quadratics)
    const Box3 unit = unit_cube();
    const EvalTable u = eval_basis(basis, unit, gauss_rule(4));
    std::vector<double> coeff(basis.size());
    const auto& nodes = basis.basis1d().nodes();
    for (std::size_t b = 0; b < basis.size(); ++b) {
        const double x = 0.5 * (nodes[b % 3] + 1.0);
        coeff[b] = x * x;
    }
    double integral = 0.0;
    for (std::size_t q = 0; q < u.nq; ++q) {
        double val = 0.0;
        for (std::size_t b = 0; b < u.nb; ++b)
            val += coeff[b] * u.value(q, b);
        integral += u.weights[q] * val;
    }
    EXPECT_NEAR(integral, 1.0 / 3.0, 1e-14);

    // physical gradient: d/dx of x^2 at a point
    std::array<double, 3> grad{};
    const double val = evaluate_polynomial(basis, unit, coeff, {0.3, 0.7, 0.1}, &grad);
    EXPECT_NEAR(val, 0.09, 1e-13);
    EXPECT_NEAR(grad[0], 0.6, 1e-12);
    EXPECT_NEAR(grad[1], 0.0, 1e-12);

    EXPECT_THROW(eval_basis(basis, Box3{{0, 0, 0}, {1, 0, 1}}, gauss_rule(2)), ConfigError);
}

TEST(TraceBasis, SubFaceWeightsAndConsistency)
{
    const Box3 elem{{0, 0, 0}, {2, 2, 2}};
    Face f;
    f.axis = 0;
    f.plane = 2.0;
    f.lo = {0.0, 1.0};
    f.hi = {1.0, 2.0};
    const TensorBasis basis = TensorBasis::velocity(3);
    const EvalTable t = trace_basis(basis, elem, f, gauss_rule(4));
    EXPECT_NEAR(std::accumulate(t.weights.begin(), t.weights.end(), 0.0), 1.0, 1e-14);

    std::mt19937 rng(5);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    std::vector<double> coeff(basis.size());
    for (double& c : coeff)
        c = d(rng);
    for (std::size_t q = 0; q < t.nq; ++q) {
        EXPECT_DOUBLE_EQ(t.points[q][0], 2.0);
        std::array<double, 3> grad{};
        const double v = evaluate_polynomial(basis, elem, coeff, t.points[q], &grad);
        double tv = 0.0, tg = 0.0;
        for (std::size_t b = 0; b < t.nb; ++b) {
            tv += coeff[b] * t.value(q, b);
            tg += coeff[b] * t.grad(1, q, b);
        }
        EXPECT_NEAR(tv, v, 1e-12);
        EXPECT_NEAR(tg, grad[1], 1e-11);
    }

    Face off = f;
    off.plane = 1.0;
    EXPECT_THROW(trace_basis(basis, elem, off, gauss_rule(2)), InvariantError);
}

TEST(Spaces, DofCounts)
{
    const DofMap one = build_dofmap(build_patch_mesh(PatchKind::Uniform, 0.5, 0), 2);
    EXPECT_EQ(one.M, 81u);
    EXPECT_EQ(one.N, 8u);
    const DofMap edge = build_dofmap(build_patch_mesh(PatchKind::Edge, 0.5, 3), 2);
    EXPECT_EQ(edge.M, 810u);
    EXPECT_EQ(edge.N, 80u);
    EXPECT_NEAR(static_cast<double>(edge.M) / edge.N, 3.0 * 27 / 8, 1e-12);
    const DofMap k3 = build_dofmap(build_patch_mesh(PatchKind::Corner, 0.5, 1), 3);
    EXPECT_NEAR(static_cast<double>(k3.M) / k3.N, 3.0 * 64 / 27, 1e-12);
    EXPECT_EQ(one.augmented_size(), 90u);
    EXPECT_EQ(one.multiplier(), 89u);
    EXPECT_EQ(edge.velocity(2, 1, 5), 2 * 81 + 27 + 5u);
    EXPECT_THROW(build_dofmap(build_patch_mesh(PatchKind::Uniform, 0.5, 0), 0), ConfigError);
}
