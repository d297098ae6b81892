#include "aed/gf2.hpp"

#include <utility>

#include "aed/errors.hpp"

namespace aed::gf2 {

SquareMatrix::SquareMatrix(int dim) {
    if (dim < 0 || dim > kMaxDim) throw ParameterError("matrix dimension out of range");
    rows_.assign(static_cast<std::size_t>(dim), 0u);
}

SquareMatrix SquareMatrix::identity(int dim) {
    SquareMatrix a(dim);
    for (int r = 0; r < dim; ++r) a.rows_[r] = 1u << r;
    return a;
}

SquareMatrix SquareMatrix::from_rows(std::vector<std::uint32_t> rows) {
    const int dim = static_cast<int>(rows.size());
    if (dim > kMaxDim) throw ParameterError("matrix dimension out of range");
    const std::uint32_t mask = dim == 32 ? ~0u : ((1u << dim) - 1u);
    for (auto r : rows)
        if (r & ~mask) throw ParameterError("matrix row has bits beyond its dimension");
    SquareMatrix a;
    a.rows_ = std::move(rows);
    return a;
}

void SquareMatrix::set(int r, int c, bool v) {
    if (v)
        rows_[r] |= 1u << c;
    else
        rows_[r] &= ~(1u << c);
}

std::uint32_t SquareMatrix::apply(std::uint32_t z) const {
    std::uint32_t out = 0;
    for (int r = 0; r < dim(); ++r) out |= static_cast<std::uint32_t>(parity(rows_[r] & z)) << r;
    return out;
}

SquareMatrix SquareMatrix::operator*(const SquareMatrix& rhs) const {
    if (dim() != rhs.dim()) throw ParameterError("matrix dimension mismatch");
    // Row r of A*B is the XOR of the rows of B selected by row r of A.
    SquareMatrix out(dim());
    for (int r = 0; r < dim(); ++r) {
        std::uint32_t acc = 0;
        for (int k = 0; k < dim(); ++k)
            if (get(r, k)) acc ^= rhs.rows_[k];
        out.rows_[r] = acc;
    }
    return out;
}

SquareMatrix SquareMatrix::transposed() const {
    SquareMatrix out(dim());
    for (int r = 0; r < dim(); ++r)
        for (int c = 0; c < dim(); ++c)
            if (get(r, c)) out.rows_[c] |= 1u << r;
    return out;
}

std::optional<SquareMatrix> SquareMatrix::inverse() const {
    SquareMatrix work = *this;
    SquareMatrix inv = identity(dim());
    for (int c = 0; c < dim(); ++c) {
        int pivot = -1;
        for (int r = c; r < dim(); ++r)
            if (work.get(r, c)) {
                pivot = r;
                break;
            }
        if (pivot < 0) return std::nullopt;
        std::swap(work.rows_[c], work.rows_[pivot]);
        std::swap(inv.rows_[c], inv.rows_[pivot]);
        for (int r = 0; r < dim(); ++r)
            if (r != c && work.get(r, c)) {
                work.rows_[r] ^= work.rows_[c];
                inv.rows_[r] ^= inv.rows_[c];
            }
    }
    return inv;
}

int SquareMatrix::rank() const {
    std::vector<std::uint32_t> work = rows_;
    int rank = 0;
    for (int c = 0; c < dim() && rank < dim(); ++c) {
        int pivot = -1;
        for (int r = rank; r < dim(); ++r)
            if ((work[r] >> c) & 1u) {
                pivot = r;
                break;
            }
        if (pivot < 0) continue;
        std::swap(work[rank], work[pivot]);
        for (int r = rank + 1; r < dim(); ++r)
            if ((work[r] >> c) & 1u) work[r] ^= work[rank];
        ++rank;
    }
    return rank;
}

bool SquareMatrix::is_lower_unitriangular() const {
    for (int r = 0; r < dim(); ++r) {
        // Allowed bits: 0..r, with bit r set.
        const std::uint32_t allowed = (r == 31) ? ~0u : ((1u << (r + 1)) - 1u);
        if ((rows_[r] & ~allowed) || !get(r, r)) return false;
    }
    return true;
}

bool SquareMatrix::is_upper_unitriangular() const {
    for (int r = 0; r < dim(); ++r) {
        const std::uint32_t below = (1u << r) - 1u;
        if ((rows_[r] & below) || !get(r, r)) return false;
    }
    return true;
}

bool SquareMatrix::is_permutation() const {
    std::uint32_t seen = 0;
    for (auto r : rows_) {
        if (__builtin_popcount(r) != 1 || (seen & r)) return false;
        seen |= r;
    }
    return true;
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), words_((cols + 63) / 64), data_(rows * words_, 0) {}

void DenseMatrix::set(std::size_t r, std::size_t c, bool v) {
    auto& w = data_[r * words_ + c / 64];
    const std::uint64_t bit = std::uint64_t{1} << (c % 64);
    if (v)
        w |= bit;
    else
        w &= ~bit;
}

void DenseMatrix::xor_row(std::size_t dst, std::size_t src) {
    for (std::size_t w = 0; w < words_; ++w) data_[dst * words_ + w] ^= data_[src * words_ + w];
}

void DenseMatrix::swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t w = 0; w < words_; ++w) std::swap(data_[a * words_ + w], data_[b * words_ + w]);
}

std::vector<std::size_t> DenseMatrix::reduce() {
    std::vector<std::size_t> pivots;
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols_ && rank < rows_; ++c) {
        std::size_t pivot = rows_;
        for (std::size_t r = rank; r < rows_; ++r)
            if (get(r, c)) {
                pivot = r;
                break;
            }
        if (pivot == rows_) continue;
        swap_rows(rank, pivot);
        for (std::size_t r = 0; r < rows_; ++r)
            if (r != rank && get(r, c)) xor_row(r, rank);
        pivots.push_back(c);
        ++rank;
    }
    return pivots;
}

DenseMatrix DenseMatrix::null_space() const {
    DenseMatrix work = *this;
    const auto pivots = work.reduce();
    std::vector<bool> is_pivot(cols_, false);
    for (auto c : pivots) is_pivot[c] = true;

    DenseMatrix basis(cols_ - pivots.size(), cols_);
    std::size_t out = 0;
    for (std::size_t c = 0; c < cols_; ++c) {
        if (is_pivot[c]) continue;
        // Free column c: set it to 1 and solve for the pivot variables.
        basis.set(out, c, true);
        for (std::size_t r = 0; r < pivots.size(); ++r)
            if (work.get(r, c)) basis.set(out, pivots[r], true);
        ++out;
    }
    return basis;
}

std::vector<std::uint8_t> DenseMatrix::multiply(std::span<const std::uint8_t> v) const {
    if (v.size() != cols_) throw ParameterError("vector length does not match matrix columns");
    const auto packed = pack(v);
    std::vector<std::uint8_t> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        std::uint64_t acc = 0;
        for (std::size_t w = 0; w < words_; ++w) acc ^= data_[r * words_ + w] & packed[w];
        out[r] = static_cast<std::uint8_t>(parity(acc));
    }
    return out;
}

std::vector<std::uint64_t> pack(std::span<const std::uint8_t> v) {
    std::vector<std::uint64_t> out((v.size() + 63) / 64, 0);
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i]) out[i / 64] |= std::uint64_t{1} << (i % 64);
    return out;
}

}  // namespace aed::gf2
