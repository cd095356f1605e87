#pragma once

#include "hexdg/kernels.hpp"

namespace hexdg::kernels::detail {

double dot_scalar(const double* x, const double* y, std::size_t n);
void axpy_scalar(double alpha, const double* x, double* y, std::size_t n);
void weighted_gram_scalar(std::size_t nq, std::size_t na, std::size_t nb, const double* a,
                          const double* w, const double* b, double* out);
void csr_spmv_scalar(std::size_t rows, const std::int64_t* row_ptr, const std::int32_t* col,
                     const double* val, const double* x, double* y);

#if defined(HEXDG_HAVE_AVX2)
double dot_avx2(const double* x, const double* y, std::size_t n);
void axpy_avx2(double alpha, const double* x, double* y, std::size_t n);
void weighted_gram_avx2(std::size_t nq, std::size_t na, std::size_t nb, const double* a,
                        const double* w, const double* b, double* out);
void csr_spmv_avx2(std::size_t rows, const std::int64_t* row_ptr, const std::int32_t* col,
                   const double* val, const double* x, double* y);
#endif

#if defined(HEXDG_HAVE_NEON)
double dot_neon(const double* x, const double* y, std::size_t n);
void axpy_neon(double alpha, const double* x, double* y, std::size_t n);
void weighted_gram_neon(std::size_t nq, std::size_t na, std::size_t nb, const double* a,
                        const double* w, const double* b, double* out);
void csr_spmv_neon(std::size_t rows, const std::int64_t* row_ptr, const std::int32_t* col,
                   const double* val, const double* x, double* y);
#endif

} // namespace hexdg::kernels::detail
