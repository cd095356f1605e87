#pragma once

// Compressed sparse row storage plus two deterministic builders: a triplet
// list (small systems, tests) and a dense-block accumulator keyed by
// (row block, column block), which matches the element coupling structure of
// DG matrices and avoids materializing millions of triplets.

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace hexdg {

struct CsrMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::int64_t> row_ptr{0};
    std::vector<std::int32_t> col;
    std::vector<double> val;

    std::size_t nnz() const { return val.size(); }

    /// y = A x (SIMD-dispatched).
    void multiply(std::span<const double> x, std::span<double> y) const;
    std::vector<double> multiply(std::span<const double> x) const;
    /// y = A^T x.
    std::vector<double> multiply_transpose(std::span<const double> x) const;

    /// Stored value at (i, j), 0 if not in the pattern.
    double coeff(std::size_t i, std::size_t j) const;
    double max_abs() const;

    CsrMatrix transpose() const;
    CsrMatrix scaled(double s) const;
    Eigen::MatrixXd to_dense() const;
    Eigen::SparseMatrix<double> to_eigen() const;

    /// Throws InvariantError when the structure is malformed.
    void validate() const;
};

/// ||X - X^T||_max computed over the union of both patterns.
double asymmetry(const CsrMatrix& a);

CsrMatrix csr_from_dense(const Eigen::MatrixXd& m, double drop = 0.0);

/// Triplets are summed in insertion order per (row, col) after a stable sort,
/// so the result is bit-reproducible.
class TripletBuilder {
public:
    TripletBuilder(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}
    void add(std::size_t i, std::size_t j, double v);
    void reserve(std::size_t n) { entries_.reserve(n); }
    CsrMatrix build() const;

private:
    struct Entry {
        std::size_t i, j;
        double v;
    };
    std::size_t rows_, cols_;
    std::vector<Entry> entries_;
};

/// Accumulates dense blocks of fixed size (rb x cb). Block (I, J) covers rows
/// [I*rb, (I+1)*rb) and columns [J*cb, (J+1)*cb). Explicit zeros are kept.
class BlockBuilder {
public:
    BlockBuilder(std::size_t row_blocks, std::size_t col_blocks, std::size_t rb, std::size_t cb);

    /// Returns the rb x cb row-major block, created zero-filled on first use.
    double* block(std::size_t I, std::size_t J);
    /// block(I, J) += alpha * data
    void add(std::size_t I, std::size_t J, const double* data, double alpha = 1.0);

    CsrMatrix build() const;
    /// Kronecker product I_copies (x) this, with the copies laid out inside
    /// each row/column block: copy c of block (I, J) lands at rows
    /// I*copies*rb + c*rb and columns J*copies*cb + c*cb.
    CsrMatrix build_replicated(int copies) const;

private:
    std::size_t row_blocks_, col_blocks_, rb_, cb_;
    std::vector<std::map<std::size_t, std::vector<double>>> rows_;
};

/// MatrixMarket coordinate real general, 1-based, 17 significant digits.
void write_matrix_market(std::ostream& out, const CsrMatrix& a);
void write_matrix_market(const std::string& path, const CsrMatrix& a);
CsrMatrix read_matrix_market(std::istream& in);

} // namespace hexdg
