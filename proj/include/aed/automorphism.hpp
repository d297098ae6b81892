#pragma once

// Affine bijections z -> A z + b of F2^m acting on codeword indices
// i = sum_j z_j 2^j, their subgroups, and the lower/upper/permutation
// factorization of the general affine group.

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aed/errors.hpp"
#include "aed/gf2.hpp"

namespace aed {

using Rng = std::mt19937_64;

enum class Subgroup { GA, LTA, UTA, PI };

std::string_view to_string(Subgroup g);
Subgroup parse_subgroup(std::string_view text);

class AffineAutomorphism {
public:
    // Throws ParameterError if a is singular or b has bits beyond dim(a).
    AffineAutomorphism(gf2::SquareMatrix a, std::uint32_t b);

    static AffineAutomorphism identity(int m);

    int dim() const { return a_.dim(); }
    const gf2::SquareMatrix& matrix() const { return a_; }
    std::uint32_t offset() const { return b_; }

    std::uint32_t map_index(std::uint32_t i) const { return a_.apply(i) ^ b_; }

    bool belongs_to(Subgroup g) const;

    // "m=<int>; A=<rows>; b=<bits>" with rows separated by ',' and character
    // c of row r holding A[r][c]; character j of b holds b_j.
    std::string to_text() const;
    static AffineAutomorphism parse(std::string_view text);

    friend bool operator==(const AffineAutomorphism&, const AffineAutomorphism&) = default;

private:
    gf2::SquareMatrix a_;
    std::uint32_t b_ = 0;
};

// Bijection on {0, ..., n-1}; map[i] = pi(i).
class Permutation {
public:
    static Permutation identity(std::size_t n);
    // Throws ParameterError unless map is a bijection.
    static Permutation from_map(std::vector<std::uint32_t> map);

    std::size_t size() const { return map_.size(); }
    std::uint32_t operator[](std::size_t i) const { return map_[i]; }
    std::span<const std::uint32_t> map() const { return map_; }

    Permutation inverse() const;
    bool is_identity() const;

    friend bool operator==(const Permutation&, const Permutation&) = default;

private:
    explicit Permutation(std::vector<std::uint32_t> map) : map_(std::move(map)) {}
    std::vector<std::uint32_t> map_;
};

Permutation compile(const AffineAutomorphism& aut);

// w_i = v_{pi(i)}.
template <class T>
std::vector<T> apply(const Permutation& p, std::span<const T> v) {
    if (v.size() != p.size()) throw ParameterError("vector length does not match permutation length");
    std::vector<T> w(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) w[i] = v[p[i]];
    return w;
}

// Undoes apply(): w_{pi(i)} = v_i.
template <class T>
std::vector<T> apply_inverse(const Permutation& p, std::span<const T> v) {
    if (v.size() != p.size()) throw ParameterError("vector length does not match permutation length");
    std::vector<T> w(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) w[p[i]] = v[i];
    return w;
}

template <class T>
std::vector<T> apply(const Permutation& p, const std::vector<T>& v) {
    return apply(p, std::span<const T>(v));
}
template <class T>
std::vector<T> apply_inverse(const Permutation& p, const std::vector<T>& v) {
    return apply_inverse(p, std::span<const T>(v));
}

// p o q, i.e. i -> p(q(i)).
AffineAutomorphism compose(const AffineAutomorphism& p, const AffineAutomorphism& q);
AffineAutomorphism inverse(const AffineAutomorphism& p);

// Uniform draw from the requested subgroup of GA(m).
AffineAutomorphism sample(int m, Subgroup g, Rng& rng);

// Number of elements of the subgroup, saturating at UINT64_MAX.
std::uint64_t group_order(int m, Subgroup g);

// M draws from the subgroup; with distinct = true no element repeats, and
// with include_identity = true the first element is the identity.
std::vector<AffineAutomorphism> sample_ensemble(int m, Subgroup g, std::size_t count, Rng& rng,
                                                bool distinct = true, bool include_identity = false);

struct LupFactors {
    AffineAutomorphism lower;  // LTA, carries the offset b
    AffineAutomorphism upper;  // UTA, zero offset
    AffineAutomorphism perm;   // PI
};

// p = lower o upper o perm, from an LUP decomposition of A^T with the
// smallest available pivot row at each step.
LupFactors mlup_decompose(const AffineAutomorphism& p);

}  // namespace aed
