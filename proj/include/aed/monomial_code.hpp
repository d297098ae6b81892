#pragma once

// Reed-Muller and polar codes described by monomial sets over F2.
//
// Codeword index i corresponds to the evaluation point z with z_j = 1 - i_j
// (reverse binary order). Row i of the Hadamard power G_N then evaluates the
// monomial prod_{j : i_j = 0} z_j, so a monomial is stored as the bitmask
// ~i restricted to m bits.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "aed/bits.hpp"
#include "aed/gf2.hpp"

namespace aed {

inline constexpr int kMaxLogLength = 20;
inline constexpr int kMaxEnumerableDimension = 24;

struct Monomial {
    std::uint32_t mask = 0;  // bit j set <=> z_j is a factor; 0 is the constant 1

    int degree() const { return __builtin_popcount(mask); }
    bool divides(Monomial g) const { return (mask & ~g.mask) == 0; }

    friend auto operator<=>(const Monomial&, const Monomial&) = default;
};

Monomial monomial_of_index(std::uint32_t index, int m);
std::uint32_t index_of_monomial(Monomial f, int m);

// f <= g in the partial order of decreasing monomial codes. Equal degree:
// sorted variable indices compared elementwise. Lower degree: some divisor of
// g with deg(f) variables dominates f.
bool precedes(Monomial f, Monomial g);

class MonomialSet {
public:
    MonomialSet(int m, std::vector<Monomial> members);

    int m() const { return m_; }
    std::size_t size() const { return members_.size(); }
    std::span<const Monomial> members() const { return members_; }
    bool contains(Monomial f) const;
    bool is_subset_of(const MonomialSet& other) const;

    friend bool operator==(const MonomialSet&, const MonomialSet&) = default;

private:
    int m_;
    std::vector<Monomial> members_;  // sorted, unique
};

enum class CodeFamily { ReedMuller, Polar };

// Immutable code description: length N = 2^m and frozen indicator
// (1 = frozen to zero). Generator rows are the non-frozen rows of G_N in
// increasing index order, which also fixes the message coordinate order.
class CodeSpec {
public:
    int m() const { return m_; }
    std::size_t length() const { return frozen_.size(); }
    std::size_t dimension() const { return info_.size(); }
    double rate() const { return static_cast<double>(dimension()) / static_cast<double>(length()); }
    CodeFamily family() const { return family_; }
    std::optional<int> rm_order() const { return rm_order_; }

    const BitVector& frozen() const { return frozen_; }
    bool is_frozen(std::size_t i) const { return frozen_[i] != 0; }
    std::span<const std::uint32_t> info_indices() const { return info_; }

    MonomialSet monomials() const;
    gf2::DenseMatrix generator() const;

    // Short identifier used in result files, e.g. "RM_4_8" or "polar_8_163".
    std::string name() const;

    friend bool operator==(const CodeSpec& a, const CodeSpec& b) { return a.m_ == b.m_ && a.frozen_ == b.frozen_; }

private:
    friend CodeSpec rm_code(int r, int m);
    friend CodeSpec polar_code(int m, std::span<const std::uint8_t> frozen);

    CodeSpec(int m, BitVector frozen, CodeFamily family, std::optional<int> rm_order);

    int m_ = 0;
    BitVector frozen_;
    std::vector<std::uint32_t> info_;
    CodeFamily family_ = CodeFamily::Polar;
    std::optional<int> rm_order_;
};

CodeSpec rm_code(int r, int m);
CodeSpec polar_code(int m, std::span<const std::uint8_t> frozen);
CodeSpec code_from_monomials(const MonomialSet& monomials);

std::size_t rm_dimension(int r, int m);

bool is_decreasing(const CodeSpec& spec);

// In-place x = v * G_N over F2 (G_N is its own inverse).
void polar_transform(std::span<std::uint8_t> v);

BitVector encode(const CodeSpec& spec, std::span<const std::uint8_t> message);

// Message coordinates of a length-N word: inverse transform, then the
// information positions. Exact inverse of encode() on codewords.
BitVector extract_message(const CodeSpec& spec, std::span<const std::uint8_t> word);

// Membership by transform: x is a codeword iff x * G_N vanishes on the frozen set.
bool is_codeword(const CodeSpec& spec, std::span<const std::uint8_t> word);

// Parity-check matrix from Gaussian elimination of the generator.
class ParityCheck {
public:
    explicit ParityCheck(const CodeSpec& spec);

    bool contains(std::span<const std::uint8_t> word) const;
    const gf2::DenseMatrix& matrix() const { return h_; }

private:
    std::size_t length_;
    gf2::DenseMatrix h_;
};

// Upper (first half of the frozen vector) and lower (second half) subcodes.
std::pair<CodeSpec, CodeSpec> split_subcodes(const CodeSpec& spec);

// One Plotkin split with membership tests for both halves and for the
// RM(1, m-1) code, reusable across a grid of product checks.
class PlotkinSplit {
public:
    explicit PlotkinSplit(const CodeSpec& spec);

    const CodeSpec& upper() const { return upper_; }
    const CodeSpec& lower() const { return lower_; }

    // Whether xu (.) xrm lies in the lower subcode. Throws PreconditionError
    // unless xu is in the upper subcode and xrm in RM(1, m-1).
    bool product_in_lower(std::span<const std::uint8_t> xu, std::span<const std::uint8_t> xrm) const;

private:
    CodeSpec upper_;
    CodeSpec lower_;
    ParityCheck upper_check_;
    ParityCheck lower_check_;
    ParityCheck hadamard_check_;
};

bool pointwise_product_in_lower(const CodeSpec& spec, std::span<const std::uint8_t> xu,
                                std::span<const std::uint8_t> xrm);

// All 2^k codewords, codeword c = encode(binary digits of c).
std::vector<BitVector> enumerate_codebook(const CodeSpec& spec);

// Frozen-set text format: "m=<int>" line, then N characters of '0' (info) / '1' (frozen).
std::string format_frozen(const CodeSpec& spec);
CodeSpec parse_frozen(std::istream& in);
CodeSpec read_frozen_file(const std::string& path);
void write_frozen_file(const CodeSpec& spec, const std::string& path);

}  // namespace aed
