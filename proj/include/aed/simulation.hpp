#pragma once

// BPSK over AWGN, a brute-force ML decoder for small codes, and the
// Monte-Carlo error-rate loop.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "aed/automorphism.hpp"
#include "aed/bits.hpp"
#include "aed/decoders.hpp"
#include "aed/ensemble.hpp"
#include "aed/monomial_code.hpp"

namespace aed {

using RealVector = std::vector<double>;

// sigma^2 = 1 / (2 R 10^(EbN0/10)). Throws ParameterError unless 0 < R <= 1.
double noise_sigma(double ebn0_db, double rate);

struct ChannelConfig {
    double ebn0_db = 0.0;
    double rate = 1.0;
    double llr_max = kDefaultLlrMax;

    double sigma() const { return noise_sigma(ebn0_db, rate); }
};

ChannelConfig channel_for(const CodeSpec& spec, double ebn0_db, double llr_max = kDefaultLlrMax);

struct Observation {
    RealVector y;
    LlrVector llr;
};

// s_i = 1 - 2 x_i, y = s + n with n ~ N(0, sigma^2), llr = 2 y / sigma^2 clipped to +-llr_max.
Observation transmit_codeword(std::span<const std::uint8_t> x, const ChannelConfig& ch, Rng& rng);
Observation transmit(const CodeSpec& spec, std::span<const std::uint8_t> message, const ChannelConfig& ch, Rng& rng);

// Exhaustive correlation decoder; ties go to the lexicographically smallest
// codeword. Throws CapacityError when k exceeds kMaxEnumerableDimension.
class MlOracle {
public:
    explicit MlOracle(const CodeSpec& spec);

    BitVector decode(std::span<const double> y) const;

private:
    std::size_t length_;
    std::vector<BitVector> codebook_;
};

BitVector ml_decode_oracle(const CodeSpec& spec, std::span<const double> y);

struct DecoderConfig {
    // ensemble.constituent is the decoder; ensemble.size == 0 means no ensemble.
    EnsembleConfig ensemble;
    // Fixed ensemble; sampled from ensemble.seed when empty and not resampling.
    std::vector<AffineAutomorphism> perms;

    bool is_plain() const { return ensemble.size == 0; }
    // "SC", "SCL-32", "Aut-32-SC"
    std::string label() const;
};

struct RunOptions {
    std::uint64_t max_frames = 10000;  // 0 = no frame limit (requires target_errors)
    std::uint64_t target_errors = 100;  // 0 = run the full frame budget
    bool all_zero = false;
    unsigned threads = 1;  // 0 = hardware concurrency
    std::uint64_t seed = 0;
    double llr_max = kDefaultLlrMax;
};

struct SimRecord {
    std::string code;
    std::string decoder;
    std::string subgroup;  // "none" for plain decoders
    std::size_t ensemble_size = 1;
    std::size_t list_size = 1;
    double ebn0_db = 0.0;
    std::uint64_t frames = 0;
    std::uint64_t block_errors = 0;
    std::uint64_t bit_errors = 0;
    std::uint64_t bp_runs = 0;
    std::uint64_t bp_iterations = 0;
    std::uint64_t bp_converged = 0;
    std::uint64_t stopping_violations = 0;  // frames with a converged BP run whose x_hat != u_hat G
    double bler = 0.0;
    double ber = 0.0;
    double avg_iterations = 0.0;  // mean over all BP constituent runs; 0 without BP
    double wall_seconds = 0.0;
};

// Per-frame outcome; exposed for paired comparisons between decoders.
struct FrameOutcome {
    bool block_error = false;
    std::uint32_t bit_errors = 0;
    std::uint32_t bp_runs = 0;
    std::uint32_t bp_iterations = 0;
    std::uint32_t bp_converged = 0;
    bool stopping_violation = false;  // converged run whose x_hat != u_hat G
};

// Frame f draws its message and noise from a stream determined by
// (seed, f) only, so results do not depend on the worker count.
class FrameRunner {
public:
    FrameRunner(const CodeSpec& spec, const DecoderConfig& decoder, const ChannelConfig& ch, const RunOptions& opts);

    FrameOutcome run(std::uint64_t frame) const;
    const std::vector<AffineAutomorphism>& fixed_ensemble() const { return fixed_; }

private:
    CodeSpec spec_;
    DecoderConfig decoder_;
    ChannelConfig ch_;
    RunOptions opts_;
    Constituent constituent_;
    std::vector<AffineAutomorphism> fixed_;
    std::vector<Permutation> fixed_compiled_;
};

// Throws ParameterError when both max_frames and target_errors are 0.
SimRecord run_mc(const CodeSpec& spec, const DecoderConfig& decoder, double ebn0_db, const RunOptions& opts);

// Evenly spaced grid from start to stop with count points (count = 1 gives start).
std::vector<double> ebn0_grid(double start, double stop, std::size_t count);

std::string csv_header();
// Set include_seconds = false to mask the wall-clock column.
std::string csv_row(const SimRecord& rec, bool include_seconds = true);

}  // namespace aed
