#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace aed::gf2 {

inline constexpr int kMaxDim = 20;

inline int parity(std::uint64_t w) { return __builtin_parityll(w); }

// Square binary matrix of dimension <= kMaxDim. Row r is a bitmask whose bit
// c holds entry (r, c), so A*z for a column vector z packed the same way is
// the parity of each row masked with z.
class SquareMatrix {
public:
    SquareMatrix() = default;
    explicit SquareMatrix(int dim);

    static SquareMatrix identity(int dim);
    static SquareMatrix from_rows(std::vector<std::uint32_t> rows);

    int dim() const { return static_cast<int>(rows_.size()); }
    bool get(int r, int c) const { return (rows_[r] >> c) & 1u; }
    void set(int r, int c, bool v);
    std::uint32_t row(int r) const { return rows_[r]; }
    std::span<const std::uint32_t> rows() const { return rows_; }

    // A * z over F2.
    std::uint32_t apply(std::uint32_t z) const;

    SquareMatrix operator*(const SquareMatrix& rhs) const;
    SquareMatrix transposed() const;
    std::optional<SquareMatrix> inverse() const;
    int rank() const;
    bool is_invertible() const { return rank() == dim(); }

    bool is_lower_unitriangular() const;
    bool is_upper_unitriangular() const;
    bool is_permutation() const;

    friend bool operator==(const SquareMatrix&, const SquareMatrix&) = default;

private:
    std::vector<std::uint32_t> rows_;
};

// Dense bit-packed rows x cols matrix, used for generator / parity-check work
// on codes up to a few thousand columns.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool get(std::size_t r, std::size_t c) const {
        return (data_[r * words_ + c / 64] >> (c % 64)) & 1u;
    }
    void set(std::size_t r, std::size_t c, bool v);
    std::span<const std::uint64_t> row(std::size_t r) const { return {data_.data() + r * words_, words_}; }

    // Reduced row echelon form in place; returns pivot columns in row order.
    std::vector<std::size_t> reduce();

    // Basis of the right null space {h : M h = 0}, one row per basis vector.
    DenseMatrix null_space() const;

    // M * v for a 0/1 vector of length cols().
    std::vector<std::uint8_t> multiply(std::span<const std::uint8_t> v) const;

private:
    void xor_row(std::size_t dst, std::size_t src);
    void swap_rows(std::size_t a, std::size_t b);

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::size_t words_ = 0;
    std::vector<std::uint64_t> data_;
};

std::vector<std::uint64_t> pack(std::span<const std::uint8_t> v);

}  // namespace aed::gf2
