#pragma once

// Constituent decoders over the polar factor graph: successive cancellation
// (SC), SC list (SCL) and flooding belief propagation (BP).
//
// Stage s holds 2^s LLRs per subtree; the channel sits at stage m and the
// message bits at stage 0. Going from stage s+1 to s pairs indices i and
// i + 2^s inside each block of 2^(s+1).

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "aed/bits.hpp"
#include "aed/monomial_code.hpp"

namespace aed {

inline constexpr double kDefaultLlrMax = 40.0;

// log((e^{a+b} + 1) / (e^a + e^b)), evaluated as
// sign(a) sign(b) min(|a|,|b|) + log1p(e^{-|a+b|}) - log1p(e^{-|a-b|}).
// The grouping keeps boxplus(-a, b) == -boxplus(a, b) and
// boxplus(a, b) == boxplus(b, a) exact in floating point. Infinite inputs
// act as known bits.
inline double boxplus(double a, double b) {
    const double sa = static_cast<double>((a > 0.0) - (a < 0.0));
    const double sb = static_cast<double>((b > 0.0) - (b < 0.0));
    const double mag = std::fmin(std::fabs(a), std::fabs(b));
    if (std::isinf(a) || std::isinf(b)) return sa * sb * mag;
    const double correction = std::log1p(std::exp(-std::fabs(a + b))) - std::log1p(std::exp(-std::fabs(a - b)));
    return sa * sb * mag + correction;
}

// HD(L) = 0 for L >= 0, 1 otherwise.
inline std::uint8_t hard_decision(double llr) { return llr >= 0.0 ? 0 : 1; }

inline double saturate(double llr, double llr_max) { return std::fmax(-llr_max, std::fmin(llr_max, llr)); }

// -log P(bit = u) for a bit with LLR l: log(1 + exp(-(1-2u) l)).
inline double decision_penalty(double llr, std::uint8_t u) {
    const double x = u ? -llr : llr;
    return x >= 0.0 ? std::log1p(std::exp(-x)) : -x + std::log1p(std::exp(x));
}

struct DecodeOutput {
    BitVector u_hat;          // length N, zeros on frozen positions
    BitVector x_hat;          // length N codeword estimate
    int iterations_used = 1;  // BP iterations; 1 for SC/SCL
    bool converged = true;    // BP stopping rule fired; always true for SC/SCL
    double metric = 0.0;      // SCL path metric; 0 for SC and BP

    BitVector message(const CodeSpec& spec) const;
};

// Scratch buffers for one SC pass; reusable across calls of one decoder.
struct ScWorkspace {
    std::vector<double> alpha;        // stage s at offset 2^s
    BitVector left_sums;              // partial sums of left children, stage s at offset 2^s
    BitVector carry;                  // partial sums on the way up, stage s at offset 2^s
};

class ScDecoder {
public:
    explicit ScDecoder(CodeSpec spec);

    const CodeSpec& spec() const { return spec_; }
    DecodeOutput decode(std::span<const double> llr) const;
    DecodeOutput decode(std::span<const double> llr, ScWorkspace& ws) const;

private:
    CodeSpec spec_;
};

class SclDecoder {
public:
    SclDecoder(CodeSpec spec, std::size_t list_size);

    const CodeSpec& spec() const { return spec_; }
    std::size_t list_size() const { return list_size_; }

    // Surviving candidates sorted by increasing path metric.
    std::vector<DecodeOutput> decode(std::span<const double> llr) const;

private:
    CodeSpec spec_;
    std::size_t list_size_;
};

struct BpOptions {
    int max_iters = 200;
    bool early_stopping = true;
    // Skip message updates on edges whose value is fixed by the frozen set.
    bool reduced_graph = false;
};

struct BpWorkspace {
    std::vector<double> left;   // right-to-left messages, stage s at offset s*N
    std::vector<double> right;  // left-to-right messages, stage s at offset s*N
    BitVector u_hat;
    BitVector x_hat;
    BitVector reencoded;
};

class BpDecoder {
public:
    BpDecoder(CodeSpec spec, BpOptions options);

    const CodeSpec& spec() const { return spec_; }
    const BpOptions& options() const { return options_; }
    DecodeOutput decode(std::span<const double> llr) const;
    DecodeOutput decode(std::span<const double> llr, BpWorkspace& ws) const;

private:
    bool block_constant(int stage, std::size_t block_start) const;
    bool block_frozen(int stage, std::size_t block_start) const;

    CodeSpec spec_;
    BpOptions options_;
    std::vector<double> initial_right_;
    // Per stage s and block of 2^s leaves: 1 all frozen, 2 all information, 0 mixed.
    std::vector<std::vector<std::uint8_t>> block_kind_;
};

DecodeOutput sc_decode(const CodeSpec& spec, std::span<const double> llr);
std::vector<DecodeOutput> scl_decode(const CodeSpec& spec, std::span<const double> llr, std::size_t list_size);
DecodeOutput bp_ffg_decode(const CodeSpec& spec, std::span<const double> llr, int max_iters, bool stopping);

}  // namespace aed
