#pragma once

// Automorphism ensemble decoding: every branch decodes a permuted copy of the
// channel LLRs with one constituent decoder, maps its estimate back, and the
// candidate with the largest correlation to the received signal wins.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "aed/automorphism.hpp"
#include "aed/bits.hpp"
#include "aed/decoders.hpp"
#include "aed/monomial_code.hpp"

namespace aed {

enum class ConstituentKind { SC, SCL, BP };

std::string_view to_string(ConstituentKind kind);
ConstituentKind parse_constituent(std::string_view text);

struct ConstituentConfig {
    ConstituentKind kind = ConstituentKind::SC;
    std::size_t list_size = 1;  // SCL only
    int max_iters = 200;        // BP only
    bool early_stopping = true;
    bool reduced_graph = false;

    // "SC", "SCL-32", "BP-200"
    std::string label() const;
};

struct EnsembleConfig {
    std::size_t size = 1;
    Subgroup subgroup = Subgroup::GA;
    ConstituentConfig constituent;
    bool resample_per_frame = false;
    std::uint64_t seed = 0;
    bool distinct = true;
    bool include_identity = false;
};

// Throws ParameterError on M = 0, L = 0 or max_iters < 1.
void validate(const EnsembleConfig& cfg);
void validate(const ConstituentConfig& cfg);

// One constituent decoder of any kind. decode() returns one output for SC
// and BP, and the metric-sorted list for SCL.
class Constituent {
public:
    Constituent(const CodeSpec& spec, const ConstituentConfig& cfg);

    const ConstituentConfig& config() const { return cfg_; }
    std::vector<DecodeOutput> decode(std::span<const double> llr) const;

private:
    ConstituentConfig cfg_;
    std::variant<ScDecoder, SclDecoder, BpDecoder> decoder_;
};

// Codeword estimate of one constituent output. SC and SCL produce codewords
// directly; for BP the hard decision x_hat need not be one, so the
// re-encoded u_hat is used.
BitVector candidate_codeword(const DecodeOutput& out, ConstituentKind kind);

struct Candidate {
    std::size_t branch = 0;
    std::size_t rank = 0;  // position in the SCL list, 0 otherwise
    BitVector x_hat;       // mapped back to the original coordinates
    double score = 0.0;    // sum_i (-1)^{x_i} y_i
    int iterations = 1;
    bool converged = true;
    bool reencodes = true;  // raw constituent x_hat == u_hat G
};

struct AedResult {
    BitVector x_hat;
    std::size_t winner = 0;  // index into candidates
    std::vector<Candidate> candidates;
};

// Branch j decodes the LLRs moved by pi_j (entry i goes to position pi_j(i),
// i.e. apply_inverse) and moves its estimate back with apply. Winner: largest
// score, then lowest branch index, then lexicographically smallest word.
AedResult aed_decode(const CodeSpec& spec, const Constituent& constituent, std::span<const double> y,
                     std::span<const double> llr, std::span<const Permutation> perms);

AedResult aed_decode(const CodeSpec& spec, std::span<const double> y, std::span<const double> llr,
                     const EnsembleConfig& cfg, std::span<const AffineAutomorphism> perms);

// Output of a single branch, used to compare branch pipelines directly.
BitVector branch_output(const Constituent& constituent, std::span<const double> llr, const Permutation& perm);

// Fixed ensemble for cfg: cfg.size automorphisms drawn from cfg.subgroup
// with a generator seeded from cfg.seed.
std::vector<AffineAutomorphism> ensemble_from_config(int m, const EnsembleConfig& cfg);

struct VerificationReport {
    std::string name;
    std::size_t trials = 0;
    std::size_t failures = 0;
    std::vector<std::string> witnesses;  // serialized failing inputs, capped

    bool passed() const { return failures == 0; }
};

// SC(pi(L)) == pi(SC(L)) for random pi in LTA(m) and random LLRs.
// Throws PreconditionError unless the code is decreasing.
VerificationReport verify_lta_commutation(const CodeSpec& spec, std::size_t trials, Rng& rng);

// Branch output under random pi in GA(m) equals the output under U o P from
// mlup_decompose(pi). Throws PreconditionError unless the code is decreasing.
VerificationReport verify_lta_absorption(const CodeSpec& spec, std::size_t trials, Rng& rng);

// Random LLR vector resembling a noisy BPSK observation of a random codeword.
LlrVector random_llr(const CodeSpec& spec, Rng& rng, double sigma = 0.8);

}  // namespace aed
