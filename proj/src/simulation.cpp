#include "aed/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <thread>

#include "aed/errors.hpp"
#include "aed/rng.hpp"

namespace aed {

double noise_sigma(double ebn0_db, double rate) {
    if (!(rate > 0.0 && rate <= 1.0)) throw ParameterError("code rate must lie in (0, 1]");
    if (!std::isfinite(ebn0_db)) throw ParameterError("Eb/N0 must be finite");
    return std::sqrt(1.0 / (2.0 * rate * std::pow(10.0, ebn0_db / 10.0)));
}

ChannelConfig channel_for(const CodeSpec& spec, double ebn0_db, double llr_max) {
    if (spec.dimension() == 0) throw ParameterError("a code of dimension 0 has no rate to simulate");
    ChannelConfig ch;
    ch.ebn0_db = ebn0_db;
    ch.rate = spec.rate();
    ch.llr_max = llr_max;
    return ch;
}

Observation transmit_codeword(std::span<const std::uint8_t> x, const ChannelConfig& ch, Rng& rng) {
    const double sigma = ch.sigma();
    std::normal_distribution<double> noise(0.0, sigma);
    Observation obs;
    obs.y.resize(x.size());
    obs.llr.resize(x.size());
    const double scale = 2.0 / (sigma * sigma);
    for (std::size_t i = 0; i < x.size(); ++i) {
        obs.y[i] = (x[i] ? -1.0 : 1.0) + noise(rng);
        obs.llr[i] = saturate(scale * obs.y[i], ch.llr_max);
    }
    return obs;
}

Observation transmit(const CodeSpec& spec, std::span<const std::uint8_t> message, const ChannelConfig& ch, Rng& rng) {
    if (spec.dimension() == 0) {
        const BitVector zero(spec.length(), 0);
        return transmit_codeword(zero, ch, rng);
    }
    const auto x = encode(spec, message);
    return transmit_codeword(x, ch, rng);
}

MlOracle::MlOracle(const CodeSpec& spec) : length_(spec.length()), codebook_(enumerate_codebook(spec)) {}

BitVector MlOracle::decode(std::span<const double> y) const {
    if (y.size() != length_) throw ParameterError("received vector length does not match the code length");
    std::size_t best = 0;
    double best_score = correlation(codebook_[0], y);
    for (std::size_t c = 1; c < codebook_.size(); ++c) {
        const double score = correlation(codebook_[c], y);
        if (score > best_score || (score == best_score && codebook_[c] < codebook_[best])) {
            best = c;
            best_score = score;
        }
    }
    return codebook_[best];
}

BitVector ml_decode_oracle(const CodeSpec& spec, std::span<const double> y) { return MlOracle(spec).decode(y); }

std::string DecoderConfig::label() const {
    const auto base = ensemble.constituent.label();
    if (is_plain()) return base;
    return "Aut-" + std::to_string(ensemble.size) + "-" + base;
}

namespace {

std::vector<Permutation> compile_all(const std::vector<AffineAutomorphism>& perms) {
    std::vector<Permutation> out;
    out.reserve(perms.size());
    for (const auto& p : perms) out.push_back(compile(p));
    return out;
}

}  // namespace

FrameRunner::FrameRunner(const CodeSpec& spec, const DecoderConfig& decoder, const ChannelConfig& ch,
                         const RunOptions& opts)
    : spec_(spec), decoder_(decoder), ch_(ch), opts_(opts), constituent_(spec, decoder.ensemble.constituent) {
    if (!decoder_.is_plain()) {
        validate(decoder_.ensemble);
        if (!decoder_.ensemble.resample_per_frame) {
            fixed_ = decoder_.perms.empty() ? ensemble_from_config(spec_.m(), decoder_.ensemble) : decoder_.perms;
            if (fixed_.size() != decoder_.ensemble.size)
                throw ParameterError("explicit ensemble has " + std::to_string(fixed_.size()) +
                                     " automorphisms, expected " + std::to_string(decoder_.ensemble.size));
            for (const auto& p : fixed_)
                if (p.dim() != spec_.m()) throw ParameterError("automorphism dimension does not match the code");
            fixed_compiled_ = compile_all(fixed_);
        }
    }
}

FrameOutcome FrameRunner::run(std::uint64_t frame) const {
    const std::size_t k = spec_.dimension();
    Rng channel_rng = make_rng(opts_.seed, frame, Stream::Channel);
    // The message is drawn even for all-zero runs so the noise stream stays aligned.
    BitVector u(k);
    std::bernoulli_distribution coin(0.5);
    for (auto& bit : u) bit = coin(channel_rng) ? 1 : 0;
    if (opts_.all_zero) std::fill(u.begin(), u.end(), 0);
    const auto obs = transmit(spec_, u, ch_, channel_rng);

    FrameOutcome outcome;
    const auto kind = decoder_.ensemble.constituent.kind;
    BitVector u_hat;
    if (decoder_.is_plain()) {
        const auto outputs = constituent_.decode(obs.llr);
        const auto& best = outputs.front();
        u_hat = best.message(spec_);
        if (kind == ConstituentKind::BP) {
            outcome.bp_runs = 1;
            outcome.bp_iterations = static_cast<std::uint32_t>(best.iterations_used);
            outcome.bp_converged = best.converged ? 1 : 0;
            if (best.converged) {
                BitVector reencoded = best.u_hat;
                polar_transform(reencoded);
                outcome.stopping_violation = reencoded != best.x_hat;
            }
        }
    } else {
        AedResult result;
        if (decoder_.ensemble.resample_per_frame) {
            Rng perm_rng = make_rng(opts_.seed, frame, Stream::Permutation);
            const auto perms = sample_ensemble(spec_.m(), decoder_.ensemble.subgroup, decoder_.ensemble.size,
                                               perm_rng, decoder_.ensemble.distinct, decoder_.ensemble.include_identity);
            const auto compiled = compile_all(perms);
            result = aed_decode(spec_, constituent_, obs.y, obs.llr, compiled);
        } else {
            result = aed_decode(spec_, constituent_, obs.y, obs.llr, fixed_compiled_);
        }
        u_hat = extract_message(spec_, result.x_hat);
        if (kind == ConstituentKind::BP) {
            for (const auto& c : result.candidates) {
                ++outcome.bp_runs;
                outcome.bp_iterations += static_cast<std::uint32_t>(c.iterations);
                outcome.bp_converged += c.converged ? 1 : 0;
                if (c.converged && !c.reencodes) outcome.stopping_violation = true;
            }
        }
    }
    outcome.bit_errors = static_cast<std::uint32_t>(hamming_distance(u, u_hat));
    outcome.block_error = outcome.bit_errors != 0;
    return outcome;
}

SimRecord run_mc(const CodeSpec& spec, const DecoderConfig& decoder, double ebn0_db, const RunOptions& opts) {
    if (opts.max_frames == 0 && opts.target_errors == 0)
        throw ParameterError("either a frame budget or a block-error target is required");
    const auto start = std::chrono::steady_clock::now();
    const ChannelConfig ch = channel_for(spec, ebn0_db, opts.llr_max);
    const FrameRunner runner(spec, decoder, ch, opts);

    unsigned threads = opts.threads == 0 ? std::thread::hardware_concurrency() : opts.threads;
    threads = std::max(1u, threads);
    const std::uint64_t batch = std::max<std::uint64_t>(16, 8ull * threads);

    SimRecord rec;
    rec.code = spec.name();
    rec.decoder = decoder.label();
    rec.subgroup = decoder.is_plain() ? "none" : std::string(to_string(decoder.ensemble.subgroup));
    rec.ensemble_size = decoder.is_plain() ? 1 : decoder.ensemble.size;
    rec.list_size = decoder.ensemble.constituent.kind == ConstituentKind::SCL ? decoder.ensemble.constituent.list_size : 1;
    rec.ebn0_db = ebn0_db;

    std::vector<FrameOutcome> outcomes;
    bool done = false;
    std::uint64_t next_frame = 0;
    while (!done) {
        std::uint64_t count = batch;
        if (opts.max_frames != 0) count = std::min(count, opts.max_frames - next_frame);
        outcomes.assign(count, FrameOutcome{});

        std::atomic<std::uint64_t> cursor{0};
        auto work = [&] {
            for (std::uint64_t i = cursor++; i < count; i = cursor++) outcomes[i] = runner.run(next_frame + i);
        };
        if (threads == 1) {
            work();
        } else {
            std::vector<std::thread> pool;
            const unsigned used = static_cast<unsigned>(std::min<std::uint64_t>(threads, count));
            for (unsigned t = 0; t < used; ++t) pool.emplace_back(work);
            for (auto& th : pool) th.join();
        }

        // Reduce in frame order so the stopping frame does not depend on scheduling.
        for (std::uint64_t i = 0; i < count; ++i) {
            const auto& o = outcomes[i];
            rec.stopping_violations += o.stopping_violation ? 1 : 0;
            ++rec.frames;
            rec.block_errors += o.block_error ? 1 : 0;
            rec.bit_errors += o.bit_errors;
            rec.bp_runs += o.bp_runs;
            rec.bp_iterations += o.bp_iterations;
            rec.bp_converged += o.bp_converged;
            if (opts.target_errors != 0 && rec.block_errors >= opts.target_errors) {
                done = true;
                break;
            }
        }
        next_frame += count;
        if (opts.max_frames != 0 && next_frame >= opts.max_frames) done = true;
    }

    rec.bler = static_cast<double>(rec.block_errors) / static_cast<double>(rec.frames);
    rec.ber = static_cast<double>(rec.bit_errors) / (static_cast<double>(rec.frames) * static_cast<double>(spec.dimension()));
    rec.avg_iterations =
        rec.bp_runs == 0 ? 0.0 : static_cast<double>(rec.bp_iterations) / static_cast<double>(rec.bp_runs);
    rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rec;
}

std::vector<double> ebn0_grid(double start, double stop, std::size_t count) {
    if (count == 0) throw ParameterError("Eb/N0 grid needs at least one point");
    if (count == 1) return {start};
    std::vector<double> grid(count);
    for (std::size_t i = 0; i < count; ++i)
        grid[i] = start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1);
    return grid;
}

std::string csv_header() { return "code,decoder,subgroup,M,L,ebn0_db,frames,block_errors,bler,ber,avg_iters,seconds"; }

std::string csv_row(const SimRecord& rec, bool include_seconds) {
    char buf[512];
    std::snprintf(buf, sizeof buf, "%s,%s,%s,%zu,%zu,%.4f,%llu,%llu,%.6e,%.6e,%.4f,", rec.code.c_str(),
                  rec.decoder.c_str(), rec.subgroup.c_str(), rec.ensemble_size, rec.list_size, rec.ebn0_db,
                  static_cast<unsigned long long>(rec.frames), static_cast<unsigned long long>(rec.block_errors),
                  rec.bler, rec.ber, rec.avg_iterations);
    std::string row(buf);
    if (include_seconds) {
        std::snprintf(buf, sizeof buf, "%.3f", rec.wall_seconds);
        row += buf;
    } else {
        row += "-";
    }
    return row;
}

}  // namespace aed
