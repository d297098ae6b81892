#include "aed/ensemble.hpp"

#include <algorithm>
#include <cstdio>
#include <random>
#include <sstream>

#include "aed/errors.hpp"
#include "aed/rng.hpp"

namespace aed {

namespace {

constexpr std::size_t kMaxWitnesses = 5;

std::string serialize_llr(std::span<const double> llr) {
    std::string s;
    char buf[32];
    for (std::size_t i = 0; i < llr.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%s%.17g", i ? "," : "", llr[i]);
        s += buf;
    }
    return s;
}

void require_decreasing(const CodeSpec& spec) {
    if (!is_decreasing(spec))
        throw PreconditionError("code " + spec.name() + " is not a decreasing monomial code; out of theorem scope");
}

}  // namespace

std::string_view to_string(ConstituentKind kind) {
    switch (kind) {
        case ConstituentKind::SC: return "sc";
        case ConstituentKind::SCL: return "scl";
        case ConstituentKind::BP: return "bp";
    }
    return "?";
}

ConstituentKind parse_constituent(std::string_view text) {
    if (text == "sc") return ConstituentKind::SC;
    if (text == "scl") return ConstituentKind::SCL;
    if (text == "bp") return ConstituentKind::BP;
    throw ParameterError("unknown decoder '" + std::string(text) + "', expected sc, scl or bp");
}

std::string ConstituentConfig::label() const {
    switch (kind) {
        case ConstituentKind::SC: return "SC";
        case ConstituentKind::SCL: return "SCL-" + std::to_string(list_size);
        case ConstituentKind::BP: return "BP-" + std::to_string(max_iters);
    }
    return "?";
}

void validate(const ConstituentConfig& cfg) {
    if (cfg.kind == ConstituentKind::SCL && cfg.list_size < 1) throw ParameterError("SCL list size must be at least 1");
    if (cfg.kind == ConstituentKind::BP && cfg.max_iters < 1) throw ParameterError("BP needs at least one iteration");
}

void validate(const EnsembleConfig& cfg) {
    if (cfg.size < 1) throw ParameterError("ensemble size must be at least 1");
    validate(cfg.constituent);
}

namespace {

std::variant<ScDecoder, SclDecoder, BpDecoder> make_decoder(const CodeSpec& spec, const ConstituentConfig& cfg) {
    validate(cfg);
    switch (cfg.kind) {
        case ConstituentKind::SC: return ScDecoder(spec);
        case ConstituentKind::SCL: return SclDecoder(spec, cfg.list_size);
        case ConstituentKind::BP: {
            BpOptions options;
            options.max_iters = cfg.max_iters;
            options.early_stopping = cfg.early_stopping;
            options.reduced_graph = cfg.reduced_graph;
            return BpDecoder(spec, options);
        }
    }
    throw ParameterError("unknown constituent kind");
}

}  // namespace

Constituent::Constituent(const CodeSpec& spec, const ConstituentConfig& cfg)
    : cfg_(cfg), decoder_(make_decoder(spec, cfg)) {}

std::vector<DecodeOutput> Constituent::decode(std::span<const double> llr) const {
    if (const auto* sc = std::get_if<ScDecoder>(&decoder_)) return {sc->decode(llr)};
    if (const auto* scl = std::get_if<SclDecoder>(&decoder_)) return scl->decode(llr);
    return {std::get<BpDecoder>(decoder_).decode(llr)};
}

BitVector candidate_codeword(const DecodeOutput& out, ConstituentKind kind) {
    if (kind != ConstituentKind::BP) return out.x_hat;
    BitVector x = out.u_hat;
    polar_transform(x);
    return x;
}

BitVector branch_output(const Constituent& constituent, std::span<const double> llr, const Permutation& perm) {
    const auto moved = apply_inverse(perm, llr);
    const auto outputs = constituent.decode(moved);
    return aed::apply(perm, candidate_codeword(outputs.front(), constituent.config().kind));
}

AedResult aed_decode(const CodeSpec& spec, const Constituent& constituent, std::span<const double> y,
                     std::span<const double> llr, std::span<const Permutation> perms) {
    if (perms.empty()) throw ParameterError("ensemble is empty");
    if (y.size() != spec.length() || llr.size() != spec.length())
        throw ParameterError("received vector length does not match the code length");

    AedResult result;
    for (std::size_t j = 0; j < perms.size(); ++j) {
        const auto moved = apply_inverse(perms[j], llr);
        const auto outputs = constituent.decode(moved);
        for (std::size_t r = 0; r < outputs.size(); ++r) {
            Candidate c;
            c.branch = j;
            c.rank = r;
            c.x_hat = aed::apply(perms[j], candidate_codeword(outputs[r], constituent.config().kind));
            c.score = correlation(c.x_hat, y);
            c.iterations = outputs[r].iterations_used;
            c.converged = outputs[r].converged;
            if (constituent.config().kind == ConstituentKind::BP) {
                BitVector reencoded = outputs[r].u_hat;
                polar_transform(reencoded);
                c.reencodes = reencoded == outputs[r].x_hat;
            }
            result.candidates.push_back(std::move(c));
        }
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i < result.candidates.size(); ++i) {
        const auto& c = result.candidates[i];
        const auto& b = result.candidates[best];
        if (c.score > b.score || (c.score == b.score && c.branch == b.branch && c.x_hat < b.x_hat)) best = i;
    }
    result.winner = best;
    result.x_hat = result.candidates[best].x_hat;
    return result;
}

AedResult aed_decode(const CodeSpec& spec, std::span<const double> y, std::span<const double> llr,
                     const EnsembleConfig& cfg, std::span<const AffineAutomorphism> perms) {
    validate(cfg);
    if (perms.empty()) throw ParameterError("ensemble is empty");
    std::vector<Permutation> compiled;
    compiled.reserve(perms.size());
    for (const auto& p : perms) {
        if (p.dim() != spec.m()) throw ParameterError("automorphism dimension does not match the code");
        compiled.push_back(compile(p));
    }
    const Constituent constituent(spec, cfg.constituent);
    return aed_decode(spec, constituent, y, llr, compiled);
}

std::vector<AffineAutomorphism> ensemble_from_config(int m, const EnsembleConfig& cfg) {
    validate(cfg);
    Rng rng = make_rng(cfg.seed, 0, Stream::Ensemble);
    return sample_ensemble(m, cfg.subgroup, cfg.size, rng, cfg.distinct, cfg.include_identity);
}

LlrVector random_llr(const CodeSpec& spec, Rng& rng, double sigma) {
    std::bernoulli_distribution coin(0.5);
    BitVector x(spec.length(), 0);
    if (spec.dimension() > 0) {
        BitVector u(spec.dimension());
        for (auto& bit : u) bit = coin(rng) ? 1 : 0;
        x = encode(spec, u);
    }
    std::normal_distribution<double> noise(0.0, sigma);
    LlrVector llr(spec.length());
    const double scale = 2.0 / (sigma * sigma);
    for (std::size_t i = 0; i < llr.size(); ++i) llr[i] = scale * ((x[i] ? -1.0 : 1.0) + noise(rng));
    return llr;
}

VerificationReport verify_lta_commutation(const CodeSpec& spec, std::size_t trials, Rng& rng) {
    require_decreasing(spec);
    VerificationReport report;
    report.name = "lta-commutation";
    const ScDecoder sc(spec);
    for (std::size_t t = 0; t < trials; ++t) {
        const auto pi = sample(spec.m(), Subgroup::LTA, rng);
        const auto perm = compile(pi);
        const auto llr = random_llr(spec, rng);
        const auto lhs = sc.decode(aed::apply(perm, llr)).x_hat;
        const auto rhs = aed::apply(perm, sc.decode(llr).x_hat);
        ++report.trials;
        if (lhs != rhs) {
            ++report.failures;
            if (report.witnesses.size() < kMaxWitnesses)
                report.witnesses.push_back(pi.to_text() + "; llr=" + serialize_llr(llr));
        }
    }
    return report;
}

VerificationReport verify_lta_absorption(const CodeSpec& spec, std::size_t trials, Rng& rng) {
    require_decreasing(spec);
    VerificationReport report;
    report.name = "lta-absorption";
    const Constituent sc(spec, ConstituentConfig{});
    for (std::size_t t = 0; t < trials; ++t) {
        const auto pi = sample(spec.m(), Subgroup::GA, rng);
        const auto f = mlup_decompose(pi);
        const auto up = compose(f.upper, f.perm);
        const auto llr = random_llr(spec, rng);
        ++report.trials;
        const bool factored = compose(f.lower, up) == pi;
        if (!factored || branch_output(sc, llr, compile(pi)) != branch_output(sc, llr, compile(up))) {
            ++report.failures;
            if (report.witnesses.size() < kMaxWitnesses)
                report.witnesses.push_back(pi.to_text() + (factored ? "" : " (factorization mismatch)") +
                                           "; llr=" + serialize_llr(llr));
        }
    }
    return report;
}

}  // namespace aed
