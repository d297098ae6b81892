#pragma once

// Executable checks of the structural properties the decoders rely on. Each
// returns a report with trial and failure counts plus a few witnesses.

#include <cstddef>

#include "aed/automorphism.hpp"
#include "aed/ensemble.hpp"
#include "aed/monomial_code.hpp"

namespace aed {

// L o U o P recomposes to p with the expected subgroup memberships. With
// exhaustive = true every invertible m x m matrix is tried (m <= 4), each
// with a random offset; otherwise `trials` random elements of GA(m).
VerificationReport verify_mlup_recomposition(int m, std::size_t trials, Rng& rng, bool exhaustive = false);

// SC(L (.) (-1)^x) == SC(L) xor x for random LLRs and random codewords x.
VerificationReport verify_sc_linearity(const CodeSpec& spec, std::size_t trials, Rng& rng);

// Upper and lower subcodes: I_u subset of I_l, and every codeword splits
// into (x_u xor x_l | x_l) with x_u, x_l in the subcodes. All codewords when
// k <= max_exhaustive_k, otherwise `trials` random ones. Throws
// PreconditionError for m = 0 or non-decreasing codes.
VerificationReport verify_plotkin_split(const CodeSpec& spec, std::size_t trials, Rng& rng,
                                        std::size_t max_exhaustive_k = 16);

// x_u (.) x_rm lies in the lower subcode for x_u in the upper subcode and
// x_rm in RM(1, m-1). Full grid when it has at most max_grid pairs,
// otherwise `trials` random pairs. Throws PreconditionError for m = 0 or
// non-decreasing codes.
VerificationReport verify_product_closure(const CodeSpec& spec, std::size_t trials, Rng& rng,
                                          std::size_t max_grid = std::size_t{1} << 20);

}  // namespace aed
