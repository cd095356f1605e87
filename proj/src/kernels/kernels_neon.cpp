#include "kernels_impl.hpp"

#include <arm_neon.h>

namespace hexdg::kernels::detail {

double dot_neon(const double* x, const double* y, std::size_t n)
{
    float64x2_t acc0 = vdupq_n_f64(0.0);
    float64x2_t acc1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc0 = vfmaq_f64(acc0, vld1q_f64(x + i), vld1q_f64(y + i));
        acc1 = vfmaq_f64(acc1, vld1q_f64(x + i + 2), vld1q_f64(y + i + 2));
    }
    double s = vaddvq_f64(vaddq_f64(acc0, acc1));
    for (; i < n; ++i)
        s += x[i] * y[i];
    return s;
}

void axpy_neon(double alpha, const double* x, double* y, std::size_t n)
{
    const float64x2_t a = vdupq_n_f64(alpha);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), a, vld1q_f64(x + i)));
    for (; i < n; ++i)
        y[i] += alpha * x[i];
}

void weighted_gram_neon(std::size_t nq, std::size_t na, std::size_t nb, const double* a,
                        const double* w, const double* b, double* out)
{
    for (std::size_t q = 0; q < nq; ++q) {
        const double* aq = a + q * na;
        const double* bq = b + q * nb;
        for (std::size_t i = 0; i < na; ++i) {
            const double t = w[q] * aq[i];
            const float64x2_t v = vdupq_n_f64(t);
            double* row = out + i * nb;
            std::size_t j = 0;
            for (; j + 2 <= nb; j += 2)
                vst1q_f64(row + j, vfmaq_f64(vld1q_f64(row + j), v, vld1q_f64(bq + j)));
            for (; j < nb; ++j)
                row[j] += t * bq[j];
        }
    }
}

void csr_spmv_neon(std::size_t rows, const std::int64_t* row_ptr, const std::int32_t* col,
                   const double* val, const double* x, double* y)
{
    for (std::size_t r = 0; r < rows; ++r) {
        std::int64_t p = row_ptr[r];
        const std::int64_t end = row_ptr[r + 1];
        float64x2_t acc = vdupq_n_f64(0.0);
        for (; p + 2 <= end; p += 2) {
            const double xv[2] = {x[col[p]], x[col[p + 1]]};
            acc = vfmaq_f64(acc, vld1q_f64(val + p), vld1q_f64(xv));
        }
        double s = vaddvq_f64(acc);
        for (; p < end; ++p)
            s += val[p] * x[col[p]];
        y[r] = s;
    }
}

} // namespace hexdg::kernels::detail
