#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace aed {

// One bit per byte, values 0/1. Used for messages, codewords and frozen masks.
using BitVector = std::vector<std::uint8_t>;

// Log-likelihood ratios; positive means bit 0 is more likely.
using LlrVector = std::vector<double>;

inline BitVector xor_bits(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
    BitVector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] ^ b[i];
    return out;
}

inline std::size_t weight(std::span<const std::uint8_t> v) {
    std::size_t w = 0;
    for (auto bit : v) w += bit;
    return w;
}

inline std::size_t hamming_distance(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] ^ b[i]);
    return d;
}

inline std::string to_string(std::span<const std::uint8_t> v) {
    std::string s(v.size(), '0');
    for (std::size_t i = 0; i < v.size(); ++i) s[i] = v[i] ? '1' : '0';
    return s;
}

// BPSK correlation sum_i (-1)^{x_i} y_i.
inline double correlation(std::span<const std::uint8_t> x, std::span<const double> y) {
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] ? -y[i] : y[i];
    return acc;
}

}  // namespace aed
