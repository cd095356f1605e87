#include "hexdg/errors.hpp"
#include "hexdg/kernels.hpp"
#include "hexdg/sparse.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace hexdg;
namespace kn = hexdg::kernels;

namespace {

std::vector<const kn::KernelTable*> variants()
{
    std::vector<const kn::KernelTable*> v;
    for (const kn::KernelTable* t : {kn::avx2_table(), kn::neon_table()})
        if (t != nullptr && kn::isa_available(t->isa))
            v.push_back(t);
    return v;
}

std::vector<double> random_vec(std::mt19937_64& rng, std::size_t n)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> v(n);
    for (double& x : v)
        x = u(rng);
    return v;
}

} // namespace

TEST(Kernels, ScalarReferenceDot)
{
    const std::vector<double> x{1, 2, 3}, y{4, 5, 6};
    EXPECT_EQ(kn::scalar_table().dot(x.data(), y.data(), 3), 32.0);
}

TEST(Kernels, DetectedIsaIsAvailable)
{
    EXPECT_TRUE(kn::isa_available(kn::detect_isa()));
    EXPECT_TRUE(kn::isa_available(kn::Isa::Scalar));
}

TEST(Kernels, SelectUnavailableThrows)
{
#if defined(__x86_64__)
    EXPECT_THROW(kn::select(kn::Isa::Neon), ConfigError);
#else
    EXPECT_THROW(kn::select(kn::Isa::Avx2), ConfigError);
#endif
}

// Every SIMD variant must agree with the scalar reference for all lengths,
// including the remainder loops.
TEST(Kernels, DotAndAxpyEquivalence)
{
    std::mt19937_64 rng(7);
    for (const kn::KernelTable* t : variants()) {
        for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 15u, 16u, 17u, 1000u, 1001u}) {
            const auto x = random_vec(rng, n);
            auto y1 = random_vec(rng, n);
            auto y2 = y1;
            const double r = kn::scalar_table().dot(x.data(), y1.data(), n);
            EXPECT_NEAR(t->dot(x.data(), y1.data(), n), r, 1e-13 * (1.0 + std::abs(r))) << n;
            kn::scalar_table().axpy(0.37, x.data(), y1.data(), n);
            t->axpy(0.37, x.data(), y2.data(), n);
            for (std::size_t i = 0; i < n; ++i)
                EXPECT_NEAR(y1[i], y2[i], 1e-15);
        }
    }
}

TEST(Kernels, WeightedGramEquivalence)
{
    std::mt19937_64 rng(11);
    for (const kn::KernelTable* t : variants()) {
        for (auto [nq, na, nb] : {std::tuple<std::size_t, std::size_t, std::size_t>{1, 1, 1}, {8, 8, 8}, {27, 27, 8},
                                  {27, 8, 27}, {125, 125, 64}, {9, 3, 5}, {343, 125, 125}}) {
            const auto a = random_vec(rng, nq * na);
            const auto w = random_vec(rng, nq);
            const auto b = random_vec(rng, nq * nb);
            std::vector<double> o1(na * nb, 0.5), o2(na * nb, 0.5);
            kn::scalar_table().weighted_gram(nq, na, nb, a.data(), w.data(), b.data(), o1.data());
            t->weighted_gram(nq, na, nb, a.data(), w.data(), b.data(), o2.data());
            for (std::size_t i = 0; i < o1.size(); ++i)
                EXPECT_NEAR(o1[i], o2[i], 1e-12) << nq << ' ' << na << ' ' << nb;
        }
    }
}

TEST(Kernels, CsrSpmvEquivalence)
{
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> len(0, 23);
    const std::size_t n = 200;
    TripletBuilder tb(n, n);
    std::uniform_int_distribution<std::size_t> col(0, n - 1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (std::size_t i = 0; i < n; ++i)
        for (int p = len(rng); p > 0; --p)
            tb.add(i, col(rng), u(rng));
    const CsrMatrix a = tb.build();
    const auto x = random_vec(rng, n);
    std::vector<double> y1(n), y2(n);
    kn::scalar_table().csr_spmv(n, a.row_ptr.data(), a.col.data(), a.val.data(), x.data(), y1.data());
    const Eigen::VectorXd ref = a.to_dense() * Eigen::Map<const Eigen::VectorXd>(x.data(), n);
    for (std::size_t i = 0; i < n; ++i)
        EXPECT_NEAR(y1[i], ref(i), 1e-13);
    for (const kn::KernelTable* t : variants()) {
        t->csr_spmv(n, a.row_ptr.data(), a.col.data(), a.val.data(), x.data(), y2.data());
        for (std::size_t i = 0; i < n; ++i)
            EXPECT_NEAR(y1[i], y2[i], 1e-13);
    }
}

TEST(Kernels, SelectRoundTrip)
{
    const kn::Isa before = kn::active_isa();
    kn::select(kn::Isa::Scalar);
    EXPECT_EQ(kn::active_isa(), kn::Isa::Scalar);
    kn::select(before);
    EXPECT_EQ(kn::active_isa(), before);
}
