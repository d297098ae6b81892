#include "aed/verification.hpp"

#include <algorithm>
#include <random>

#include "aed/decoders.hpp"
#include "aed/errors.hpp"

namespace aed {

namespace {

constexpr std::size_t kMaxWitnesses = 5;

void record(VerificationReport& report, bool ok, const std::string& witness) {
    ++report.trials;
    if (ok) return;
    ++report.failures;
    if (report.witnesses.size() < kMaxWitnesses) report.witnesses.push_back(witness);
}

BitVector random_message(std::size_t k, Rng& rng) {
    std::bernoulli_distribution coin(0.5);
    BitVector u(k);
    for (auto& bit : u) bit = coin(rng) ? 1 : 0;
    return u;
}

// encode() that also accepts the zero-dimensional code.
BitVector encode_any(const CodeSpec& spec, std::span<const std::uint8_t> u) {
    if (spec.dimension() == 0) return BitVector(spec.length(), 0);
    return encode(spec, u);
}

BitVector random_codeword(const CodeSpec& spec, Rng& rng) {
    return encode_any(spec, random_message(spec.dimension(), rng));
}

void require_split(const CodeSpec& spec) {
    if (spec.m() < 1) throw PreconditionError("a length-1 code has no Plotkin split");
    if (!is_decreasing(spec))
        throw PreconditionError("code " + spec.name() + " is not a decreasing monomial code; out of theorem scope");
}

bool check_mlup(const AffineAutomorphism& p) {
    const auto f = mlup_decompose(p);
    if (!f.lower.belongs_to(Subgroup::LTA)) return false;
    if (!f.upper.belongs_to(Subgroup::UTA) || f.upper.offset() != 0) return false;
    if (!f.perm.belongs_to(Subgroup::PI) || f.perm.offset() != 0) return false;
    if (f.lower.offset() != p.offset()) return false;
    if (f.lower.matrix() * f.upper.matrix() * f.perm.matrix() != p.matrix()) return false;
    return compose(compose(f.lower, f.upper), f.perm) == p;
}

}  // namespace

VerificationReport verify_mlup_recomposition(int m, std::size_t trials, Rng& rng, bool exhaustive) {
    VerificationReport report;
    report.name = "mlup-recomposition";
    if (!exhaustive) {
        for (std::size_t t = 0; t < trials; ++t) {
            const auto p = sample(m, Subgroup::GA, rng);
            record(report, check_mlup(p), p.to_text());
        }
        return report;
    }
    if (m < 1 || m > 4) throw ParameterError("exhaustive factorization check supports 1 <= m <= 4");
    const std::uint32_t row_values = 1u << m;
    const std::uint64_t total = std::uint64_t{1} << (m * m);
    std::uniform_int_distribution<std::uint32_t> offset(0, row_values - 1);
    for (std::uint64_t code = 0; code < total; ++code) {
        std::vector<std::uint32_t> rows(m);
        for (int r = 0; r < m; ++r) rows[r] = static_cast<std::uint32_t>((code >> (r * m)) & (row_values - 1));
        const auto a = gf2::SquareMatrix::from_rows(rows);
        if (!a.is_invertible()) continue;
        const AffineAutomorphism p(a, offset(rng));
        record(report, check_mlup(p), p.to_text());
    }
    return report;
}

VerificationReport verify_sc_linearity(const CodeSpec& spec, std::size_t trials, Rng& rng) {
    VerificationReport report;
    report.name = "sc-linearity";
    const ScDecoder sc(spec);
    for (std::size_t t = 0; t < trials; ++t) {
        const auto llr = random_llr(spec, rng);
        const auto x = random_codeword(spec, rng);
        LlrVector flipped(llr);
        for (std::size_t i = 0; i < x.size(); ++i)
            if (x[i]) flipped[i] = -flipped[i];
        const auto lhs = sc.decode(flipped).x_hat;
        const auto rhs = xor_bits(sc.decode(llr).x_hat, x);
        record(report, lhs == rhs, "x=" + to_string(x));
    }
    return report;
}

VerificationReport verify_plotkin_split(const CodeSpec& spec, std::size_t trials, Rng& rng,
                                        std::size_t max_exhaustive_k) {
    require_split(spec);
    VerificationReport report;
    report.name = "plotkin-split";
    const auto [upper, lower] = split_subcodes(spec);
    const std::size_t half = spec.length() / 2;

    bool nested = true;
    for (std::size_t i = 0; i < half; ++i)
        if (!upper.is_frozen(i) && lower.is_frozen(i)) nested = false;
    record(report, nested && is_decreasing(upper) && is_decreasing(lower), "subcodes " + format_frozen(upper));

    const ParityCheck upper_check(upper);
    const ParityCheck lower_check(lower);
    auto check_word = [&](const BitVector& x) {
        const BitVector xl(x.begin() + static_cast<std::ptrdiff_t>(half), x.end());
        BitVector xu(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(half));
        for (std::size_t i = 0; i < half; ++i) xu[i] ^= xl[i];
        bool ok = upper_check.contains(xu) && lower_check.contains(xl);
        if (ok) {
            const auto ru = upper.dimension() ? encode(upper, extract_message(upper, xu)) : BitVector(half, 0);
            const auto rl = lower.dimension() ? encode(lower, extract_message(lower, xl)) : BitVector(half, 0);
            BitVector rebuilt(spec.length());
            for (std::size_t i = 0; i < half; ++i) {
                rebuilt[i] = ru[i] ^ rl[i];
                rebuilt[i + half] = rl[i];
            }
            ok = rebuilt == x;
        }
        record(report, ok, "x=" + to_string(x));
    };

    if (spec.dimension() <= max_exhaustive_k) {
        for (const auto& x : enumerate_codebook(spec)) check_word(x);
    } else {
        for (std::size_t t = 0; t < trials; ++t) check_word(random_codeword(spec, rng));
    }
    return report;
}

VerificationReport verify_product_closure(const CodeSpec& spec, std::size_t trials, Rng& rng, std::size_t max_grid) {
    require_split(spec);
    VerificationReport report;
    report.name = "product-closure";
    const PlotkinSplit split(spec);
    const auto hadamard = rm_code(std::min(1, spec.m() - 1), spec.m() - 1);

    auto check_pair = [&](const BitVector& xu, const BitVector& xrm) {
        record(report, split.product_in_lower(xu, xrm), "xu=" + to_string(xu) + "; xrm=" + to_string(xrm));
    };

    const std::size_t ku = split.upper().dimension();
    const std::size_t krm = hadamard.dimension();
    if (ku + krm < 64 && ku <= static_cast<std::size_t>(kMaxEnumerableDimension) &&
        (std::uint64_t{1} << (ku + krm)) <= max_grid) {
        const auto upper_words = enumerate_codebook(split.upper());
        const auto rm_words = enumerate_codebook(hadamard);
        for (const auto& xu : upper_words)
            for (const auto& xrm : rm_words) check_pair(xu, xrm);
    } else {
        for (std::size_t t = 0; t < trials; ++t)
            check_pair(random_codeword(split.upper(), rng), random_codeword(hadamard, rng));
    }
    return report;
}

}  // namespace aed
