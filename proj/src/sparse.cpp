#include "hexdg/sparse.hpp"

#include "hexdg/errors.hpp"
#include "hexdg/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace hexdg {

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const
{
    if (x.size() != cols || y.size() != rows)
        throw_config("CSR multiply: dimension mismatch");
    kernels::active().csr_spmv(rows, row_ptr.data(), col.data(), val.data(), x.data(), y.data());
}

std::vector<double> CsrMatrix::multiply(std::span<const double> x) const
{
    std::vector<double> y(rows);
    multiply(x, y);
    return y;
}

std::vector<double> CsrMatrix::multiply_transpose(std::span<const double> x) const
{
    if (x.size() != rows)
        throw_config("CSR multiply_transpose: dimension mismatch");
    std::vector<double> y(cols, 0.0);
    for (std::size_t i = 0; i < rows; ++i) {
        for (auto p = row_ptr[i]; p < row_ptr[i + 1]; ++p)
            y[col[p]] += val[p] * x[i];
    }
    return y;
}

double CsrMatrix::coeff(std::size_t i, std::size_t j) const
{
    const auto b = col.begin() + row_ptr[i];
    const auto e = col.begin() + row_ptr[i + 1];
    const auto it = std::lower_bound(b, e, static_cast<std::int32_t>(j));
    if (it == e || *it != static_cast<std::int32_t>(j))
        return 0.0;
    return val[it - col.begin()];
}

double CsrMatrix::max_abs() const
{
    double m = 0.0;
    for (double v : val)
        m = std::max(m, std::abs(v));
    return m;
}

CsrMatrix CsrMatrix::transpose() const
{
    CsrMatrix t;
    t.rows = cols;
    t.cols = rows;
    t.row_ptr.assign(cols + 1, 0);
    for (std::int32_t c : col)
        ++t.row_ptr[c + 1];
    for (std::size_t j = 0; j < cols; ++j)
        t.row_ptr[j + 1] += t.row_ptr[j];
    t.col.resize(nnz());
    t.val.resize(nnz());
    std::vector<std::int64_t> next(t.row_ptr.begin(), t.row_ptr.end() - 1);
    for (std::size_t i = 0; i < rows; ++i) {
        for (auto p = row_ptr[i]; p < row_ptr[i + 1]; ++p) {
            const auto q = next[col[p]]++;
            t.col[q] = static_cast<std::int32_t>(i);
            t.val[q] = val[p];
        }
    }
    return t;
}

CsrMatrix CsrMatrix::scaled(double s) const
{
    CsrMatrix r = *this;
    for (double& v : r.val)
        v *= s;
    return r;
}

Eigen::MatrixXd CsrMatrix::to_dense() const
{
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < rows; ++i) {
        for (auto p = row_ptr[i]; p < row_ptr[i + 1]; ++p)
            m(static_cast<Eigen::Index>(i), col[p]) += val[p];
    }
    return m;
}

Eigen::SparseMatrix<double> CsrMatrix::to_eigen() const
{
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(nnz());
    for (std::size_t i = 0; i < rows; ++i) {
        for (auto p = row_ptr[i]; p < row_ptr[i + 1]; ++p)
            t.emplace_back(static_cast<int>(i), col[p], val[p]);
    }
    Eigen::SparseMatrix<double> m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    m.setFromTriplets(t.begin(), t.end());
    return m;
}

void CsrMatrix::validate() const
{
    if (row_ptr.size() != rows + 1 || row_ptr.front() != 0
        || row_ptr.back() != static_cast<std::int64_t>(nnz()) || col.size() != val.size())
        throw_invariant("CSR: inconsistent array sizes");
    for (std::size_t i = 0; i < rows; ++i) {
        if (row_ptr[i + 1] < row_ptr[i])
            throw_invariant("CSR: row pointers not monotone");
        for (auto p = row_ptr[i]; p < row_ptr[i + 1]; ++p) {
            if (col[p] < 0 || static_cast<std::size_t>(col[p]) >= cols)
                throw_invariant("CSR: column index out of range");
            if (p > row_ptr[i] && col[p] <= col[p - 1])
                throw_invariant("CSR: columns not strictly increasing");
        }
    }
}

double asymmetry(const CsrMatrix& a)
{
    if (a.rows != a.cols)
        throw_config("asymmetry of a non-square matrix");
    const CsrMatrix t = a.transpose();
    double m = 0.0;
    for (std::size_t i = 0; i < a.rows; ++i) {
        // merge the two sorted rows
        auto p = a.row_ptr[i];
        auto q = t.row_ptr[i];
        while (p < a.row_ptr[i + 1] || q < t.row_ptr[i + 1]) {
            double d;
            if (q >= t.row_ptr[i + 1] || (p < a.row_ptr[i + 1] && a.col[p] < t.col[q])) {
                d = a.val[p++];
            } else if (p >= a.row_ptr[i + 1] || t.col[q] < a.col[p]) {
                d = t.val[q++];
            } else {
                d = a.val[p++] - t.val[q++];
            }
            m = std::max(m, std::abs(d));
        }
    }
    return m;
}

CsrMatrix csr_from_dense(const Eigen::MatrixXd& m, double drop)
{
    CsrMatrix a;
    a.rows = static_cast<std::size_t>(m.rows());
    a.cols = static_cast<std::size_t>(m.cols());
    a.row_ptr.assign(1, 0);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (std::abs(m(i, j)) > drop) {
                a.col.push_back(static_cast<std::int32_t>(j));
                a.val.push_back(m(i, j));
            }
        }
        a.row_ptr.push_back(static_cast<std::int64_t>(a.val.size()));
    }
    return a;
}

void TripletBuilder::add(std::size_t i, std::size_t j, double v)
{
    if (i >= rows_ || j >= cols_)
        throw_invariant("triplet index out of range");
    entries_.push_back({i, j, v});
}

CsrMatrix TripletBuilder::build() const
{
    if (cols_ > static_cast<std::size_t>(std::numeric_limits<std::int32_t>::max()))
        throw_config("matrix too wide for 32-bit column indices");
    std::vector<Entry> e = entries_;
    std::stable_sort(e.begin(), e.end(), [](const Entry& a, const Entry& b) {
        return a.i != b.i ? a.i < b.i : a.j < b.j;
    });
    CsrMatrix a;
    a.rows = rows_;
    a.cols = cols_;
    a.row_ptr.assign(rows_ + 1, 0);
    for (std::size_t p = 0; p < e.size();) {
        double s = 0.0;
        std::size_t q = p;
        for (; q < e.size() && e[q].i == e[p].i && e[q].j == e[p].j; ++q)
            s += e[q].v;
        a.col.push_back(static_cast<std::int32_t>(e[p].j));
        a.val.push_back(s);
        ++a.row_ptr[e[p].i + 1];
        p = q;
    }
    for (std::size_t i = 0; i < rows_; ++i)
        a.row_ptr[i + 1] += a.row_ptr[i];
    return a;
}

BlockBuilder::BlockBuilder(std::size_t row_blocks, std::size_t col_blocks, std::size_t rb, std::size_t cb)
    : row_blocks_(row_blocks), col_blocks_(col_blocks), rb_(rb), cb_(cb), rows_(row_blocks)
{
}

double* BlockBuilder::block(std::size_t I, std::size_t J)
{
    if (I >= row_blocks_ || J >= col_blocks_)
        throw_invariant("block index out of range");
    auto& b = rows_[I][J];
    if (b.empty())
        b.assign(rb_ * cb_, 0.0);
    return b.data();
}

void BlockBuilder::add(std::size_t I, std::size_t J, const double* data, double alpha)
{
    double* b = block(I, J);
    for (std::size_t p = 0; p < rb_ * cb_; ++p)
        b[p] += alpha * data[p];
}

CsrMatrix BlockBuilder::build() const { return build_replicated(1); }

CsrMatrix BlockBuilder::build_replicated(int copies) const
{
    const std::size_t c = static_cast<std::size_t>(copies);
    CsrMatrix a;
    a.rows = row_blocks_ * c * rb_;
    a.cols = col_blocks_ * c * cb_;
    if (a.cols > static_cast<std::size_t>(std::numeric_limits<std::int32_t>::max()))
        throw_config("matrix too wide for 32-bit column indices");
    std::size_t nnz = 0;
    for (const auto& row : rows_)
        nnz += row.size() * rb_ * cb_ * c;
    a.col.reserve(nnz);
    a.val.reserve(nnz);
    a.row_ptr.assign(1, 0);
    for (std::size_t I = 0; I < row_blocks_; ++I) {
        for (std::size_t copy = 0; copy < c; ++copy) {
            for (std::size_t r = 0; r < rb_; ++r) {
                for (const auto& [J, data] : rows_[I]) {
                    const std::size_t base = J * c * cb_ + copy * cb_;
                    for (std::size_t s = 0; s < cb_; ++s) {
                        a.col.push_back(static_cast<std::int32_t>(base + s));
                        a.val.push_back(data[r * cb_ + s]);
                    }
                }
                a.row_ptr.push_back(static_cast<std::int64_t>(a.val.size()));
            }
        }
    }
    return a;
}

void write_matrix_market(std::ostream& out, const CsrMatrix& a)
{
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << a.rows << ' ' << a.cols << ' ' << a.nnz() << '\n';
    out << std::setprecision(17);
    for (std::size_t i = 0; i < a.rows; ++i) {
        for (auto p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p)
            out << i + 1 << ' ' << a.col[p] + 1 << ' ' << a.val[p] << '\n';
    }
}

void write_matrix_market(const std::string& path, const CsrMatrix& a)
{
    std::ofstream f(path);
    if (!f)
        throw_config("cannot open " + path + " for writing");
    write_matrix_market(f, a);
}

CsrMatrix read_matrix_market(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line) || line.rfind("%%MatrixMarket", 0) != 0)
        throw_config("not a MatrixMarket file");
    while (std::getline(in, line) && !line.empty() && line[0] == '%') {
    }
    std::istringstream head(line);
    std::size_t rows = 0, cols = 0, nnz = 0;
    if (!(head >> rows >> cols >> nnz))
        throw_config("malformed MatrixMarket size line");
    TripletBuilder b(rows, cols);
    for (std::size_t p = 0; p < nnz; ++p) {
        std::size_t i = 0, j = 0;
        double v = 0.0;
        if (!(in >> i >> j >> v) || i == 0 || j == 0)
            throw_config("malformed MatrixMarket entry");
        b.add(i - 1, j - 1, v);
    }
    return b.build();
}

} // namespace hexdg
