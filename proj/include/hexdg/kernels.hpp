#pragma once

// Data-parallel inner loops used by assembly and the Krylov solver.
//
// Every kernel has a scalar reference implementation and, where the target
// supports it, an AVX2/FMA (x86-64) or NEON (aarch64) variant. The variant is
// chosen once at startup from cpuid; HEXDG_KERNELS=scalar|avx2|neon in the
// environment overrides the choice. Variants agree with the scalar reference
// up to floating-point reassociation (see tests/test_kernels.cpp).

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace hexdg::kernels {

enum class Isa { Scalar, Avx2, Neon };

struct KernelTable {
    Isa isa;

    double (*dot)(const double* x, const double* y, std::size_t n);

    // y += alpha * x
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);

    // out[i*nb + j] += sum_q w[q] * a[q*na + i] * b[q*nb + j]
    // Tables are quadrature-point major so the j loop is unit stride.
    void (*weighted_gram)(std::size_t nq, std::size_t na, std::size_t nb, const double* a,
                          const double* w, const double* b, double* out);

    // y = A x for a CSR matrix.
    void (*csr_spmv)(std::size_t rows, const std::int64_t* row_ptr, const std::int32_t* col,
                     const double* val, const double* x, double* y);
};

const KernelTable& scalar_table();

/// nullptr when the variant was not compiled into this binary.
const KernelTable* avx2_table();
const KernelTable* neon_table();

/// Best variant supported by both the binary and the running CPU.
Isa detect_isa();

bool isa_available(Isa isa);

const KernelTable& active();
Isa active_isa();

/// Force a variant (tests, benchmarking). Throws ConfigError if unavailable.
void select(Isa isa);

std::string_view isa_name(Isa isa);

// Span conveniences routed through the active table.
double dot(std::span<const double> x, std::span<const double> y);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
double norm2(std::span<const double> x);

} // namespace hexdg::kernels
