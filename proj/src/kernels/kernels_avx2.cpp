// Built with -mavx2 -mfma. Nothing here may run before the dispatcher has
// confirmed CPU support.

#include "kernels_impl.hpp"

#include <immintrin.h>

namespace hexdg::kernels::detail {

namespace {

inline double hsum(__m256d v)
{
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

} // namespace

double dot_avx2(const double* x, const double* y, std::size_t n)
{
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4)
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i)
        s += x[i] * y[i];
    return s;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n)
{
    const __m256d a = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(a, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    for (; i < n; ++i)
        y[i] += alpha * x[i];
}

void weighted_gram_avx2(std::size_t nq, std::size_t na, std::size_t nb, const double* a,
                        const double* w, const double* b, double* out)
{
    // Two quadrature points per pass halves the load/store traffic on out.
    std::size_t q = 0;
    for (; q + 2 <= nq; q += 2) {
        const double* a0 = a + q * na;
        const double* a1 = a0 + na;
        const double* b0 = b + q * nb;
        const double* b1 = b0 + nb;
        for (std::size_t i = 0; i < na; ++i) {
            const double t0 = w[q] * a0[i];
            const double t1 = w[q + 1] * a1[i];
            const __m256d v0 = _mm256_set1_pd(t0);
            const __m256d v1 = _mm256_set1_pd(t1);
            double* row = out + i * nb;
            std::size_t j = 0;
            for (; j + 4 <= nb; j += 4) {
                __m256d r = _mm256_loadu_pd(row + j);
                r = _mm256_fmadd_pd(v0, _mm256_loadu_pd(b0 + j), r);
                r = _mm256_fmadd_pd(v1, _mm256_loadu_pd(b1 + j), r);
                _mm256_storeu_pd(row + j, r);
            }
            for (; j < nb; ++j)
                row[j] += t0 * b0[j] + t1 * b1[j];
        }
    }
    for (; q < nq; ++q) {
        const double* aq = a + q * na;
        const double* bq = b + q * nb;
        for (std::size_t i = 0; i < na; ++i) {
            const double t = w[q] * aq[i];
            const __m256d v = _mm256_set1_pd(t);
            double* row = out + i * nb;
            std::size_t j = 0;
            for (; j + 4 <= nb; j += 4)
                _mm256_storeu_pd(row + j, _mm256_fmadd_pd(v, _mm256_loadu_pd(bq + j), _mm256_loadu_pd(row + j)));
            for (; j < nb; ++j)
                row[j] += t * bq[j];
        }
    }
}

void csr_spmv_avx2(std::size_t rows, const std::int64_t* row_ptr, const std::int32_t* col,
                   const double* val, const double* x, double* y)
{
    for (std::size_t r = 0; r < rows; ++r) {
        std::int64_t p = row_ptr[r];
        const std::int64_t end = row_ptr[r + 1];
        __m256d acc = _mm256_setzero_pd();
        for (; p + 4 <= end; p += 4) {
            const __m128i idx = _mm_loadu_si128(reinterpret_cast<const __m128i*>(col + p));
            const __m256d xv = _mm256_i32gather_pd(x, idx, 8);
            acc = _mm256_fmadd_pd(_mm256_loadu_pd(val + p), xv, acc);
        }
        double s = hsum(acc);
        for (; p < end; ++p)
            s += val[p] * x[col[p]];
        y[r] = s;
    }
}

} // namespace hexdg::kernels::detail
