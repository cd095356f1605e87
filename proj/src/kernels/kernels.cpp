#include "hexdg/kernels.hpp"

#include "hexdg/errors.hpp"
#include "kernels_impl.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <string>

namespace hexdg::kernels {

namespace {

const KernelTable kScalar{Isa::Scalar, detail::dot_scalar, detail::axpy_scalar,
                          detail::weighted_gram_scalar, detail::csr_spmv_scalar};

#if defined(HEXDG_HAVE_AVX2)
const KernelTable kAvx2{Isa::Avx2, detail::dot_avx2, detail::axpy_avx2,
                        detail::weighted_gram_avx2, detail::csr_spmv_avx2};
#endif

#if defined(HEXDG_HAVE_NEON)
const KernelTable kNeon{Isa::Neon, detail::dot_neon, detail::axpy_neon,
                        detail::weighted_gram_neon, detail::csr_spmv_neon};
#endif

bool cpu_has_avx2()
{
#if defined(HEXDG_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const KernelTable* table_for(Isa isa)
{
    switch (isa) {
    case Isa::Scalar: return &kScalar;
    case Isa::Avx2: return cpu_has_avx2() ? avx2_table() : nullptr;
    case Isa::Neon: return neon_table();
    }
    return nullptr;
}

const KernelTable* initial_table()
{
    if (const char* env = std::getenv("HEXDG_KERNELS")) {
        const std::string want(env);
        for (Isa isa : {Isa::Scalar, Isa::Avx2, Isa::Neon}) {
            if (want == isa_name(isa)) {
                if (const KernelTable* t = table_for(isa))
                    return t;
            }
        }
    }
    return table_for(detect_isa());
}

std::atomic<const KernelTable*>& current()
{
    static std::atomic<const KernelTable*> table{initial_table()};
    return table;
}

} // namespace

const KernelTable& scalar_table() { return kScalar; }

const KernelTable* avx2_table()
{
#if defined(HEXDG_HAVE_AVX2)
    return &kAvx2;
#else
    return nullptr;
#endif
}

const KernelTable* neon_table()
{
#if defined(HEXDG_HAVE_NEON)
    return &kNeon;
#else
    return nullptr;
#endif
}

Isa detect_isa()
{
    if (cpu_has_avx2())
        return Isa::Avx2;
    if (neon_table() != nullptr)
        return Isa::Neon;
    return Isa::Scalar;
}

bool isa_available(Isa isa) { return table_for(isa) != nullptr; }

const KernelTable& active() { return *current().load(std::memory_order_acquire); }

Isa active_isa() { return active().isa; }

void select(Isa isa)
{
    const KernelTable* t = table_for(isa);
    if (t == nullptr)
        throw ConfigError("kernel variant '" + std::string(isa_name(isa)) + "' is not available on this CPU/build");
    current().store(t, std::memory_order_release);
}

std::string_view isa_name(Isa isa)
{
    switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
    }
    return "unknown";
}

double dot(std::span<const double> x, std::span<const double> y)
{
    return active().dot(x.data(), y.data(), x.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y)
{
    active().axpy(alpha, x.data(), y.data(), x.size());
}

double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

} // namespace hexdg::kernels
