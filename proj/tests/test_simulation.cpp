#include <doctest.h>

#include <cmath>
#include <random>

#include "aed/errors.hpp"
#include "aed/simulation.hpp"
#include "oracles.hpp"

using namespace aed;

TEST_CASE("noise level from Eb/N0 and rate") {
    CHECK(noise_sigma(0.0, 0.5) == doctest::Approx(1.0));
    CHECK(noise_sigma(3.0, 0.5) == doctest::Approx(std::sqrt(1.0 / std::pow(10.0, 0.3))));
    CHECK(noise_sigma(2.0, 64.0 / 128.0) == doctest::Approx(std::sqrt(1.0 / (2.0 * 0.5 * std::pow(10.0, 0.2)))));
    CHECK_THROWS_AS(noise_sigma(1.0, 0.0), ParameterError);
    CHECK_THROWS_AS(noise_sigma(1.0, 1.5), ParameterError);
    CHECK_THROWS_AS(channel_for(polar_code(3, BitVector(8, 1)), 1.0), ParameterError);
    CHECK(channel_for(rm_code(3, 7), 2.0).rate == doctest::Approx(0.5));
}

TEST_CASE("channel LLR statistics") {
    ChannelConfig ch;
    ch.ebn0_db = 1.0;
    ch.rate = 0.5;
    ch.llr_max = 1e9;
    const double s2 = ch.sigma() * ch.sigma();
    std::mt19937_64 rng(11);
    const BitVector zeros(1000, 0);
    double sum = 0.0;
    double sum_y = 0.0;
    std::size_t count = 0;
    for (int t = 0; t < 1000; ++t) {
        const auto obs = transmit_codeword(zeros, ch, rng);
        for (std::size_t i = 0; i < obs.llr.size(); ++i) {
            sum += obs.llr[i];
            sum_y += obs.y[i];
            CHECK(obs.llr[i] == doctest::Approx(2.0 * obs.y[i] / s2));
        }
        count += obs.llr.size();
    }
    CHECK(std::abs(sum / count - 2.0 / s2) < 0.01 * 2.0 / s2);
    CHECK(std::abs(sum_y / count - 1.0) < 0.01);
}

TEST_CASE("LLRs are clipped and follow the codeword at high SNR") {
    ChannelConfig ch;
    ch.ebn0_db = 60.0;
    ch.rate = 0.5;
    ch.llr_max = 20.0;
    std::mt19937_64 rng(12);
    const auto spec = rm_code(2, 5);
    BitVector u(spec.dimension());
    for (auto& b : u) b = rng() & 1u;
    const auto x = encode(spec, u);
    const auto obs = transmit(spec, u, ch, rng);
    for (std::size_t i = 0; i < x.size(); ++i) {
        CHECK(std::abs(obs.llr[i]) == 20.0);
        CHECK((obs.llr[i] < 0) == (x[i] != 0));
    }
}

TEST_CASE("ML oracle against an independent search") {
    std::mt19937_64 rng(13);
    const auto spec = rm_code(1, 4);
    const MlOracle ml(spec);
    const auto words = oracle::codebook(oracle::kronecker_power(4), oracle::rm_rows(1, 4));
    std::normal_distribution<double> n(0.0, 1.0);
    for (int t = 0; t < 200; ++t) {
        std::vector<double> y(16);
        for (auto& v : y) v = n(rng);
        CHECK(ml.decode(y) == oracle::ml_decode(words, y));
    }
    // Noiseless inputs return the transmitted word.
    for (const auto& w : words) {
        std::vector<double> y(16);
        for (std::size_t i = 0; i < 16; ++i) y[i] = w[i] ? -1.0 : 1.0;
        CHECK(ml.decode(y) == w);
    }
}

TEST_CASE("ML oracle edge cases") {
    // k = 0: the only codeword is zero.
    const auto empty = polar_code(3, BitVector(8, 1));
    CHECK(ml_decode_oracle(empty, std::vector<double>(8, -1.0)) == BitVector(8, 0));
    // An all-zero observation ties every codeword; the smallest one wins.
    CHECK(ml_decode_oracle(rm_code(1, 3), std::vector<double>(8, 0.0)) == BitVector(8, 0));
    CHECK_THROWS_AS(MlOracle(rm_code(4, 8)), CapacityError);
}

TEST_CASE("ML is at least as good as SC on the same noise") {
    std::mt19937_64 rng(14);
    const auto spec = rm_code(1, 3);
    const MlOracle ml(spec);
    int ml_err = 0;
    int sc_err = 0;
    for (int t = 0; t < 20000; ++t) {
        BitVector u(spec.dimension());
        for (auto& b : u) b = rng() & 1u;
        const auto x = encode(spec, u);
        const auto obs = transmit(spec, u, channel_for(spec, 1.0), rng);
        ml_err += ml.decode(obs.y) != x;
        sc_err += sc_decode(spec, obs.llr).x_hat != x;
    }
    CHECK(sc_err > 0);
    CHECK(ml_err <= sc_err);
}

TEST_CASE("decoder labels") {
    DecoderConfig d;
    d.ensemble.size = 0;
    CHECK(d.label() == "SC");
    d.ensemble.constituent.kind = ConstituentKind::SCL;
    d.ensemble.constituent.list_size = 32;
    CHECK(d.label() == "SCL-32");
    d.ensemble.constituent = ConstituentConfig{};
    d.ensemble.size = 32;
    CHECK(d.label() == "Aut-32-SC");
}

TEST_CASE("noise-free operation yields no errors") {
    RunOptions opts;
    opts.max_frames = 200;
    opts.target_errors = 0;
    opts.seed = 3;
    DecoderConfig d;
    d.ensemble.size = 0;
    const auto rec = run_mc(rm_code(3, 7), d, 60.0, opts);
    CHECK(rec.frames == 200);
    CHECK(rec.block_errors == 0);
    CHECK(rec.bler == 0.0);
    CHECK(rec.subgroup == "none");
}

TEST_CASE("runs are reproducible and independent of the thread count") {
    const auto spec = rm_code(2, 6);
    DecoderConfig d;
    d.ensemble.size = 4;
    d.ensemble.seed = 9;
    d.ensemble.resample_per_frame = true;
    RunOptions opts;
    opts.max_frames = 300;
    opts.target_errors = 0;
    opts.seed = 77;
    const auto a = run_mc(spec, d, 2.0, opts);
    const auto b = run_mc(spec, d, 2.0, opts);
    opts.threads = 3;
    const auto c = run_mc(spec, d, 2.0, opts);
    CHECK(csv_row(a, false) == csv_row(b, false));
    CHECK(csv_row(a, false) == csv_row(c, false));
    CHECK(a.bit_errors == c.bit_errors);
    opts.seed = 78;
    const auto e = run_mc(spec, d, 2.0, opts);
    CHECK(e.frames == 300);
}

TEST_CASE("target error count stops the run") {
    RunOptions opts;
    opts.max_frames = 100000;
    opts.target_errors = 25;
    opts.seed = 1;
    DecoderConfig d;
    d.ensemble.size = 0;
    const auto rec = run_mc(rm_code(3, 7), d, 1.0, opts);
    CHECK(rec.block_errors >= 25);
    CHECK(rec.frames < 100000);
    // Batches are reduced in frame order, so the stop lands on the exact frame.
    CHECK(rec.block_errors == 25);
    opts.max_frames = 0;
    opts.target_errors = 0;
    CHECK_THROWS_AS(run_mc(rm_code(3, 7), d, 1.0, opts), ParameterError);
}

TEST_CASE("BP iteration accounting") {
    const auto spec = rm_code(2, 5);
    DecoderConfig d;
    d.ensemble.size = 0;
    d.ensemble.constituent.kind = ConstituentKind::BP;
    d.ensemble.constituent.max_iters = 30;
    RunOptions opts;
    opts.max_frames = 100;
    opts.target_errors = 0;
    auto rec = run_mc(spec, d, 2.0, opts);
    CHECK(rec.bp_runs == 100);
    CHECK(rec.avg_iterations > 0.0);
    CHECK(rec.avg_iterations <= 30.0);
    CHECK(rec.stopping_violations == 0);
    d.ensemble.constituent.early_stopping = false;
    rec = run_mc(spec, d, 2.0, opts);
    CHECK(rec.avg_iterations == 30.0);
    d.ensemble.constituent = ConstituentConfig{};
    rec = run_mc(spec, d, 2.0, opts);
    CHECK(rec.avg_iterations == 0.0);
}

TEST_CASE("all-zero transmission matches random messages for linear decoders") {
    const auto spec = rm_code(3, 7);
    DecoderConfig d;
    d.ensemble.size = 0;
    RunOptions opts;
    opts.max_frames = 4000;
    opts.target_errors = 0;
    opts.seed = 5;
    const auto random = run_mc(spec, d, 2.5, opts);
    opts.all_zero = true;
    const auto zero = run_mc(spec, d, 2.5, opts);
    const double p = 0.5 * (random.bler + zero.bler);
    const double sd = std::sqrt(2.0 * p * (1.0 - p) / 4000.0);
    CHECK(std::abs(random.bler - zero.bler) <= 2.0 * sd);
}

TEST_CASE("single LTA branch equals plain SC frame by frame") {
    const auto spec = rm_code(3, 7);
    DecoderConfig plain;
    plain.ensemble.size = 0;
    DecoderConfig lta;
    lta.ensemble.size = 1;
    lta.ensemble.subgroup = Subgroup::LTA;
    lta.ensemble.resample_per_frame = true;
    RunOptions opts;
    opts.seed = 21;
    const FrameRunner a(spec, plain, channel_for(spec, 2.0), opts);
    const FrameRunner b(spec, lta, channel_for(spec, 2.0), opts);
    int errors = 0;
    for (std::uint64_t f = 0; f < 500; ++f) {
        const auto oa = a.run(f);
        const auto ob = b.run(f);
        CHECK(oa.block_error == ob.block_error);
        CHECK(oa.bit_errors == ob.bit_errors);
        errors += oa.block_error;
    }
    CHECK(errors > 0);
}

TEST_CASE("grid and CSV formatting") {
    const auto g = ebn0_grid(1.0, 3.0, 5);
    REQUIRE(g.size() == 5);
    CHECK(g[0] == 1.0);
    CHECK(g[2] == doctest::Approx(2.0));
    CHECK(g[4] == 3.0);
    CHECK(ebn0_grid(2.0, 5.0, 1) == std::vector<double>{2.0});
    CHECK_THROWS_AS(ebn0_grid(1.0, 2.0, 0), ParameterError);

    CHECK(csv_header() == "code,decoder,subgroup,M,L,ebn0_db,frames,block_errors,bler,ber,avg_iters,seconds");
    SimRecord r;
    r.code = "RM_3_7";
    r.decoder = "SC";
    r.subgroup = "none";
    r.ebn0_db = 2.0;
    r.frames = 100;
    r.block_errors = 7;
    r.bler = 0.07;
    r.ber = 0.001;
    r.wall_seconds = 1.25;
    CHECK(csv_row(r) == "RM_3_7,SC,none,1,1,2.0000,100,7,7.000000e-02,1.000000e-03,0.0000,1.250");
    CHECK(csv_row(r, false) == "RM_3_7,SC,none,1,1,2.0000,100,7,7.000000e-02,1.000000e-03,0.0000,-");
}
