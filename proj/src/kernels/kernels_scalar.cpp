#include "kernels_impl.hpp"

namespace hexdg::kernels::detail {

double dot_scalar(const double* x, const double* y, std::size_t n)
{
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        s += x[i] * y[i];
    return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i)
        y[i] += alpha * x[i];
}

void weighted_gram_scalar(std::size_t nq, std::size_t na, std::size_t nb, const double* a,
                          const double* w, const double* b, double* out)
{
    for (std::size_t q = 0; q < nq; ++q) {
        const double* aq = a + q * na;
        const double* bq = b + q * nb;
        for (std::size_t i = 0; i < na; ++i) {
            const double t = w[q] * aq[i];
            if (t == 0.0)
                continue;
            double* row = out + i * nb;
            for (std::size_t j = 0; j < nb; ++j)
                row[j] += t * bq[j];
        }
    }
}

void csr_spmv_scalar(std::size_t rows, const std::int64_t* row_ptr, const std::int32_t* col,
                     const double* val, const double* x, double* y)
{
    for (std::size_t r = 0; r < rows; ++r) {
        double s = 0.0;
        for (std::int64_t p = row_ptr[r]; p < row_ptr[r + 1]; ++p)
            s += val[p] * x[col[p]];
        y[r] = s;
    }
}

} // namespace hexdg::kernels::detail
