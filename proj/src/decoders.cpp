#include "aed/decoders.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "aed/errors.hpp"

namespace aed {

namespace {

void check_llr(const CodeSpec& spec, std::span<const double> llr) {
    if (llr.size() != spec.length())
        throw ParameterError("LLR vector has length " + std::to_string(llr.size()) + ", expected N=" +
                             std::to_string(spec.length()));
    for (double l : llr)
        if (!std::isfinite(l)) throw ParameterError("LLR vector contains a non-finite value");
}

// LLRs of the node on stage s from its parent on stage s+1, first child.
void update_first_child(double* alpha, int s) {
    const std::size_t h = std::size_t{1} << s;
    const double* parent = alpha + 2 * h;
    double* out = alpha + h;
    for (std::size_t k = 0; k < h; ++k) out[k] = boxplus(parent[k], parent[k + h]);
}

// Second child: (-1)^{u} L_i + L_{i + 2^s} with u the partial sums of the first child.
void update_second_child(double* alpha, const std::uint8_t* left_sums, int s) {
    const std::size_t h = std::size_t{1} << s;
    const double* parent = alpha + 2 * h;
    const std::uint8_t* u = left_sums + h;
    double* out = alpha + h;
    for (std::size_t k = 0; k < h; ++k) out[k] = (u[k] ? -parent[k] : parent[k]) + parent[k + h];
}

// After this call alpha[1] holds the LLR of leaf `leaf`. Only the stages below
// the lowest set bit of `leaf` are recomputed; higher stages still hold the
// ancestors' LLRs from earlier leaves.
void descend_to_leaf(double* alpha, const std::uint8_t* left_sums, int m, std::size_t leaf) {
    if (m == 0) return;
    int s = m - 1;
    if (leaf != 0) {
        s = __builtin_ctzll(leaf);
        update_second_child(alpha, left_sums, s);
        --s;
    }
    for (; s >= 0; --s) update_first_child(alpha, s);
}

// Push the decision of `leaf` up the tree: u_{i,s+1} = u_{i,s} xor u_{i+2^s,s},
// u_{i+2^s,s+1} = u_{i+2^s,s}. Stops at the first ancestor that is a left
// child, whose sums are parked in left_sums. Returns true when the root was
// reached; the codeword estimate is then carry[N .. 2N).
bool propagate_decision(std::uint8_t* left_sums, std::uint8_t* carry, int m, std::size_t leaf, std::uint8_t u) {
    carry[1] = u;
    for (int s = 0; s < m; ++s) {
        const std::size_t h = std::size_t{1} << s;
        std::uint8_t* cur = carry + h;
        if (!((leaf >> s) & 1u)) {
            std::copy(cur, cur + h, left_sums + h);
            return false;
        }
        const std::uint8_t* left = left_sums + h;
        std::uint8_t* parent = carry + 2 * h;
        for (std::size_t k = 0; k < h; ++k) {
            parent[k] = left[k] ^ cur[k];
            parent[k + h] = cur[k];
        }
    }
    return true;
}

}  // namespace

BitVector DecodeOutput::message(const CodeSpec& spec) const {
    BitVector u;
    u.reserve(spec.dimension());
    for (auto i : spec.info_indices()) u.push_back(u_hat[i]);
    return u;
}

ScDecoder::ScDecoder(CodeSpec spec) : spec_(std::move(spec)) {}

DecodeOutput ScDecoder::decode(std::span<const double> llr) const {
    ScWorkspace ws;
    return decode(llr, ws);
}

DecodeOutput ScDecoder::decode(std::span<const double> llr, ScWorkspace& ws) const {
    check_llr(spec_, llr);
    const int m = spec_.m();
    const std::size_t n = spec_.length();
    ws.alpha.resize(2 * n);
    ws.left_sums.assign(2 * n, 0);
    ws.carry.assign(2 * n, 0);
    std::copy(llr.begin(), llr.end(), ws.alpha.begin() + static_cast<std::ptrdiff_t>(n));

    DecodeOutput out;
    out.u_hat.assign(n, 0);
    for (std::size_t leaf = 0; leaf < n; ++leaf) {
        descend_to_leaf(ws.alpha.data(), ws.left_sums.data(), m, leaf);
        const std::uint8_t u = spec_.is_frozen(leaf) ? 0 : hard_decision(ws.alpha[1]);
        out.u_hat[leaf] = u;
        propagate_decision(ws.left_sums.data(), ws.carry.data(), m, leaf, u);
    }
    out.x_hat.assign(ws.carry.begin() + static_cast<std::ptrdiff_t>(n), ws.carry.end());
    return out;
}

SclDecoder::SclDecoder(CodeSpec spec, std::size_t list_size) : spec_(std::move(spec)), list_size_(list_size) {
    if (list_size_ < 1) throw ParameterError("list size must be at least 1");
}

namespace {

struct SclPath {
    std::vector<double> alpha;
    BitVector left_sums;
    BitVector u;
    BitVector x;
    double metric = 0.0;
};

struct SclCandidate {
    double metric;
    std::size_t rank;  // position of the parent in the active list
    std::uint8_t bit;
};

}  // namespace

std::vector<DecodeOutput> SclDecoder::decode(std::span<const double> llr) const {
    check_llr(spec_, llr);
    const int m = spec_.m();
    const std::size_t n = spec_.length();

    std::vector<SclPath> slots(list_size_);
    std::vector<std::size_t> active{0};
    std::vector<std::size_t> free_slots;
    for (std::size_t s = list_size_; s-- > 1;) free_slots.push_back(s);
    slots[0].alpha.assign(2 * n, 0.0);
    slots[0].left_sums.assign(2 * n, 0);
    slots[0].u.assign(n, 0);
    std::copy(llr.begin(), llr.end(), slots[0].alpha.begin() + static_cast<std::ptrdiff_t>(n));
    BitVector carry(2 * n, 0);

    std::vector<SclCandidate> candidates;
    std::vector<std::uint8_t> keep;  // per active rank: bit0 = keep u=0, bit1 = keep u=1

    auto commit = [&](SclPath& path, std::size_t leaf, std::uint8_t u) {
        path.u[leaf] = u;
        if (propagate_decision(path.left_sums.data(), carry.data(), m, leaf, u))
            path.x.assign(carry.begin() + static_cast<std::ptrdiff_t>(n), carry.end());
    };

    for (std::size_t leaf = 0; leaf < n; ++leaf) {
        for (auto idx : active) descend_to_leaf(slots[idx].alpha.data(), slots[idx].left_sums.data(), m, leaf);

        if (spec_.is_frozen(leaf)) {
            for (auto idx : active) {
                slots[idx].metric += decision_penalty(slots[idx].alpha[1], 0);
                commit(slots[idx], leaf, 0);
            }
            continue;
        }

        candidates.clear();
        for (std::size_t r = 0; r < active.size(); ++r) {
            const auto& path = slots[active[r]];
            const double l = path.alpha[1];
            candidates.push_back({path.metric + decision_penalty(l, 0), r, 0});
            candidates.push_back({path.metric + decision_penalty(l, 1), r, 1});
        }
        if (candidates.size() > list_size_) {
            auto better = [](const SclCandidate& a, const SclCandidate& b) {
                if (a.metric != b.metric) return a.metric < b.metric;
                if (a.rank != b.rank) return a.rank < b.rank;
                return a.bit < b.bit;
            };
            std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(list_size_),
                              candidates.end(), better);
            candidates.resize(list_size_);
        }
        keep.assign(active.size(), 0);
        std::vector<double> kept_metric(2 * active.size(), 0.0);
        for (const auto& c : candidates) {
            keep[c.rank] |= static_cast<std::uint8_t>(1u << c.bit);
            kept_metric[2 * c.rank + c.bit] = c.metric;
        }

        // Release dropped paths before cloning so their slots can be reused.
        std::vector<std::size_t> next;
        next.reserve(list_size_);
        for (std::size_t r = 0; r < active.size(); ++r)
            if (keep[r] == 0) free_slots.push_back(active[r]);
        const std::size_t ranks = active.size();
        for (std::size_t r = 0; r < ranks; ++r) {
            const std::size_t idx = active[r];
            if (keep[r] == 0) continue;
            if (keep[r] == 3) {
                const std::size_t clone = free_slots.back();
                free_slots.pop_back();
                slots[clone] = slots[idx];
                slots[idx].metric = kept_metric[2 * r];
                commit(slots[idx], leaf, 0);
                slots[clone].metric = kept_metric[2 * r + 1];
                commit(slots[clone], leaf, 1);
                next.push_back(idx);
                next.push_back(clone);
            } else {
                const std::uint8_t bit = keep[r] == 1 ? 0 : 1;
                slots[idx].metric = kept_metric[2 * r + bit];
                commit(slots[idx], leaf, bit);
                next.push_back(idx);
            }
        }
        active = std::move(next);
    }

    std::vector<std::size_t> order(active.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return slots[active[a]].metric < slots[active[b]].metric;
    });
    std::vector<DecodeOutput> out;
    out.reserve(active.size());
    for (auto r : order) {
        const auto& path = slots[active[r]];
        DecodeOutput d;
        d.u_hat = path.u;
        d.x_hat = path.x;
        d.metric = path.metric;
        out.push_back(std::move(d));
    }
    return out;
}

BpDecoder::BpDecoder(CodeSpec spec, BpOptions options) : spec_(std::move(spec)), options_(options) {
    if (options_.max_iters < 1) throw ParameterError("BP needs at least one iteration");
    const int m = spec_.m();
    const std::size_t n = spec_.length();

    block_kind_.resize(static_cast<std::size_t>(m) + 1);
    for (int s = 0; s <= m; ++s) {
        const std::size_t size = std::size_t{1} << s;
        auto& kinds = block_kind_[s];
        kinds.resize(n / size);
        for (std::size_t b = 0; b < kinds.size(); ++b) {
            bool all_frozen = true;
            bool all_info = true;
            for (std::size_t i = b * size; i < (b + 1) * size; ++i) {
                all_frozen = all_frozen && spec_.is_frozen(i);
                all_info = all_info && !spec_.is_frozen(i);
            }
            kinds[b] = all_frozen ? 1 : (all_info ? 2 : 0);
        }
    }

    // Right-going messages before any channel information: frozen leaves are
    // known zeros (+inf), information leaves carry nothing, swept once
    // through the graph with zero left-going messages.
    initial_right_.assign((static_cast<std::size_t>(m) + 1) * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        if (spec_.is_frozen(i)) initial_right_[i] = std::numeric_limits<double>::infinity();
    for (int s = 0; s < m; ++s) {
        const std::size_t h = std::size_t{1} << s;
        const double* r_in = initial_right_.data() + static_cast<std::size_t>(s) * n;
        double* r_out = initial_right_.data() + static_cast<std::size_t>(s + 1) * n;
        for (std::size_t b = 0; b < n; b += 2 * h)
            for (std::size_t i = b; i < b + h; ++i) {
                const std::size_t j = i + h;
                r_out[i] = boxplus(r_in[i], r_in[j]);
                r_out[j] = boxplus(r_in[i], 0.0) + r_in[j];
            }
    }
}

bool BpDecoder::block_constant(int stage, std::size_t block_start) const {
    return block_kind_[stage][block_start >> stage] != 0;
}

bool BpDecoder::block_frozen(int stage, std::size_t block_start) const {
    return block_kind_[stage][block_start >> stage] == 1;
}

DecodeOutput BpDecoder::decode(std::span<const double> llr) const {
    BpWorkspace ws;
    return decode(llr, ws);
}

DecodeOutput BpDecoder::decode(std::span<const double> llr, BpWorkspace& ws) const {
    check_llr(spec_, llr);
    const int m = spec_.m();
    const std::size_t n = spec_.length();
    const bool reduced = options_.reduced_graph;

    ws.right = initial_right_;
    ws.left.assign((static_cast<std::size_t>(m) + 1) * n, 0.0);
    std::copy(llr.begin(), llr.end(), ws.left.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(m) * n));
    ws.u_hat.assign(n, 0);
    ws.x_hat.assign(n, 0);

    auto left_at = [&](int s) { return ws.left.data() + static_cast<std::size_t>(s) * n; };
    auto right_at = [&](int s) { return ws.right.data() + static_cast<std::size_t>(s) * n; };

    DecodeOutput out;
    out.converged = false;
    int iter = 0;
    while (iter < options_.max_iters) {
        ++iter;
        // Right-to-left pass, stage m-1 down to 0.
        for (int s = m - 1; s >= 0; --s) {
            const std::size_t h = std::size_t{1} << s;
            const double* l_in = left_at(s + 1);
            const double* r_in = right_at(s);
            double* l_out = left_at(s);
            for (std::size_t b = 0; b < n; b += 2 * h) {
                const bool skip_upper = reduced && block_frozen(s, b);
                const bool skip_lower = reduced && block_frozen(s, b + h);
                if (skip_upper && skip_lower) continue;
                for (std::size_t i = b; i < b + h; ++i) {
                    const std::size_t j = i + h;
                    if (!skip_upper) l_out[i] = boxplus(l_in[i], l_in[j] + r_in[j]);
                    if (!skip_lower) l_out[j] = boxplus(l_in[i], r_in[i]) + l_in[j];
                }
            }
        }
        // Left-to-right pass, stage 0 up to m-1.
        for (int s = 0; s < m; ++s) {
            const std::size_t h = std::size_t{1} << s;
            const double* l_in = left_at(s + 1);
            const double* r_in = right_at(s);
            double* r_out = right_at(s + 1);
            for (std::size_t b = 0; b < n; b += 2 * h) {
                if (reduced && block_constant(s + 1, b)) continue;
                for (std::size_t i = b; i < b + h; ++i) {
                    const std::size_t j = i + h;
                    r_out[i] = boxplus(r_in[i], l_in[j] + r_in[j]);
                    r_out[j] = boxplus(r_in[i], l_in[i]) + r_in[j];
                }
            }
        }

        const double* l0 = left_at(0);
        const double* r0 = right_at(0);
        const double* lm = left_at(m);
        const double* rm = right_at(m);
        for (std::size_t i = 0; i < n; ++i) {
            ws.u_hat[i] = spec_.is_frozen(i) ? 0 : hard_decision(l0[i] + r0[i]);
            ws.x_hat[i] = hard_decision(lm[i] + rm[i]);
        }
        if (options_.early_stopping) {
            ws.reencoded = ws.u_hat;
            polar_transform(ws.reencoded);
            if (ws.reencoded == ws.x_hat) {
                out.converged = true;
                break;
            }
        }
    }
    out.iterations_used = iter;
    out.u_hat = ws.u_hat;
    out.x_hat = ws.x_hat;
    return out;
}

DecodeOutput sc_decode(const CodeSpec& spec, std::span<const double> llr) { return ScDecoder(spec).decode(llr); }

std::vector<DecodeOutput> scl_decode(const CodeSpec& spec, std::span<const double> llr, std::size_t list_size) {
    return SclDecoder(spec, list_size).decode(llr);
}

DecodeOutput bp_ffg_decode(const CodeSpec& spec, std::span<const double> llr, int max_iters, bool stopping) {
    BpOptions options;
    options.max_iters = max_iters;
    options.early_stopping = stopping;
    return BpDecoder(spec, options).decode(llr);
}

}  // namespace aed
