#include "aed/automorphism.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <set>
#include <utility>

namespace aed {

namespace {

std::uint32_t low_mask(int m) { return m >= 32 ? ~0u : ((1u << m) - 1u); }

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '\n'))
        s.remove_suffix(1);
    return s;
}

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) return std::numeric_limits<std::uint64_t>::max();
    return a * b;
}

std::uint64_t pow2_saturating(int e) {
    return e >= 64 ? std::numeric_limits<std::uint64_t>::max() : (std::uint64_t{1} << e);
}

}  // namespace

std::string_view to_string(Subgroup g) {
    switch (g) {
        case Subgroup::GA: return "ga";
        case Subgroup::LTA: return "lta";
        case Subgroup::UTA: return "uta";
        case Subgroup::PI: return "pi";
    }
    return "?";
}

Subgroup parse_subgroup(std::string_view text) {
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "ga") return Subgroup::GA;
    if (lower == "lta") return Subgroup::LTA;
    if (lower == "uta") return Subgroup::UTA;
    if (lower == "pi") return Subgroup::PI;
    throw ParameterError("unknown subgroup '" + std::string(text) + "' (expected ga, lta, uta or pi)");
}

AffineAutomorphism::AffineAutomorphism(gf2::SquareMatrix a, std::uint32_t b) : a_(std::move(a)), b_(b) {
    if (b_ & ~low_mask(a_.dim())) throw ParameterError("offset b has bits beyond the dimension");
    if (!a_.is_invertible()) throw ParameterError("matrix A is singular over F2");
}

AffineAutomorphism AffineAutomorphism::identity(int m) { return {gf2::SquareMatrix::identity(m), 0}; }

bool AffineAutomorphism::belongs_to(Subgroup g) const {
    switch (g) {
        case Subgroup::GA: return true;
        case Subgroup::LTA: return a_.is_lower_unitriangular();
        case Subgroup::UTA: return a_.is_upper_unitriangular();
        case Subgroup::PI: return a_.is_permutation() && b_ == 0;
    }
    return false;
}

std::string AffineAutomorphism::to_text() const {
    const int m = dim();
    std::string out = "m=" + std::to_string(m) + "; A=";
    for (int r = 0; r < m; ++r) {
        if (r > 0) out += ',';
        for (int c = 0; c < m; ++c) out += a_.get(r, c) ? '1' : '0';
    }
    out += "; b=";
    for (int j = 0; j < m; ++j) out += ((b_ >> j) & 1u) ? '1' : '0';
    return out;
}

AffineAutomorphism AffineAutomorphism::parse(std::string_view text) {
    int m = -1;
    std::string a_bits;
    std::string b_bits;
    bool have_a = false;
    bool have_b = false;
    while (!text.empty()) {
        const auto semi = text.find(';');
        const auto field = trim(text.substr(0, semi));
        text = semi == std::string_view::npos ? std::string_view{} : text.substr(semi + 1);
        if (field.empty()) continue;
        const auto eq = field.find('=');
        if (eq == std::string_view::npos) throw ParameterError("automorphism field without '=': " + std::string(field));
        const auto key = trim(field.substr(0, eq));
        const auto value = trim(field.substr(eq + 1));
        if (key == "m") {
            try {
                m = std::stoi(std::string(value));
            } catch (const std::logic_error&) {
                throw ParameterError("cannot parse m in automorphism text");
            }
        } else if (key == "A") {
            for (char c : value)
                if (c == '0' || c == '1')
                    a_bits += c;
                else if (c != ',' && c != ' ')
                    throw ParameterError("matrix rows may only contain '0', '1' and ','");
            have_a = true;
        } else if (key == "b") {
            b_bits = std::string(value);
            have_b = true;
        } else {
            throw ParameterError("unknown automorphism field '" + std::string(key) + "'");
        }
    }
    if (m < 1 || m > gf2::kMaxDim || !have_a || !have_b)
        throw ParameterError("automorphism text needs m in [1, 20], A and b");
    if (a_bits.size() != static_cast<std::size_t>(m * m) || b_bits.size() != static_cast<std::size_t>(m))
        throw ParameterError("automorphism A must have m*m entries and b must have m entries");
    gf2::SquareMatrix a(m);
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c) a.set(r, c, a_bits[static_cast<std::size_t>(r * m + c)] == '1');
    std::uint32_t b = 0;
    for (int j = 0; j < m; ++j) {
        if (b_bits[j] != '0' && b_bits[j] != '1') throw ParameterError("offset b may only contain '0' and '1'");
        if (b_bits[j] == '1') b |= 1u << j;
    }
    return {std::move(a), b};
}

Permutation Permutation::identity(std::size_t n) {
    std::vector<std::uint32_t> map(n);
    std::iota(map.begin(), map.end(), 0u);
    return Permutation(std::move(map));
}

Permutation Permutation::from_map(std::vector<std::uint32_t> map) {
    std::vector<bool> seen(map.size(), false);
    for (auto v : map) {
        if (v >= map.size() || seen[v]) throw ParameterError("index map is not a bijection");
        seen[v] = true;
    }
    return Permutation(std::move(map));
}

Permutation Permutation::inverse() const {
    std::vector<std::uint32_t> inv(map_.size());
    for (std::uint32_t i = 0; i < map_.size(); ++i) inv[map_[i]] = i;
    return Permutation(std::move(inv));
}

bool Permutation::is_identity() const {
    for (std::uint32_t i = 0; i < map_.size(); ++i)
        if (map_[i] != i) return false;
    return true;
}

Permutation compile(const AffineAutomorphism& aut) {
    const std::size_t n = std::size_t{1} << aut.dim();
    std::vector<std::uint32_t> map(n);
    for (std::uint32_t i = 0; i < n; ++i) map[i] = aut.map_index(i);
    return Permutation::from_map(std::move(map));
}

AffineAutomorphism compose(const AffineAutomorphism& p, const AffineAutomorphism& q) {
    if (p.dim() != q.dim()) throw ParameterError("cannot compose automorphisms of different dimension");
    // p(q(z)) = A_p (A_q z + b_q) + b_p
    return {p.matrix() * q.matrix(), p.matrix().apply(q.offset()) ^ p.offset()};
}

AffineAutomorphism inverse(const AffineAutomorphism& p) {
    auto inv = p.matrix().inverse();
    const std::uint32_t b = inv->apply(p.offset());
    return {std::move(*inv), b};
}

AffineAutomorphism sample(int m, Subgroup g, Rng& rng) {
    if (m < 1 || m > gf2::kMaxDim) throw ParameterError("automorphism dimension must lie in [1, 20]");
    const std::uint32_t mask = low_mask(m);
    std::vector<std::uint32_t> rows(static_cast<std::size_t>(m));
    switch (g) {
        case Subgroup::GA: {
            // Rejection: about 29% of uniform matrices are invertible for large m.
            for (;;) {
                for (auto& r : rows) r = static_cast<std::uint32_t>(rng()) & mask;
                auto a = gf2::SquareMatrix::from_rows(rows);
                if (a.is_invertible()) return {std::move(a), static_cast<std::uint32_t>(rng()) & mask};
            }
        }
        case Subgroup::LTA:
            for (int r = 0; r < m; ++r)
                rows[r] = (1u << r) | (static_cast<std::uint32_t>(rng()) & ((1u << r) - 1u));
            return {gf2::SquareMatrix::from_rows(rows), static_cast<std::uint32_t>(rng()) & mask};
        case Subgroup::UTA:
            for (int r = 0; r < m; ++r) {
                const std::uint32_t above = mask & ~((1u << (r + 1)) - 1u);
                rows[r] = (1u << r) | (static_cast<std::uint32_t>(rng()) & above);
            }
            return {gf2::SquareMatrix::from_rows(rows), static_cast<std::uint32_t>(rng()) & mask};
        case Subgroup::PI: {
            std::vector<int> perm(static_cast<std::size_t>(m));
            std::iota(perm.begin(), perm.end(), 0);
            for (int i = m - 1; i > 0; --i) {
                std::uniform_int_distribution<int> pick(0, i);
                std::swap(perm[i], perm[pick(rng)]);
            }
            for (int r = 0; r < m; ++r) rows[r] = 1u << perm[r];
            return {gf2::SquareMatrix::from_rows(rows), 0};
        }
    }
    throw ParameterError("unknown subgroup");
}

std::uint64_t group_order(int m, Subgroup g) {
    switch (g) {
        case Subgroup::GA: {
            std::uint64_t order = pow2_saturating(m);
            for (int i = 0; i < m; ++i) order = saturating_mul(order, pow2_saturating(m) - pow2_saturating(i));
            return order;
        }
        case Subgroup::LTA:
        case Subgroup::UTA: return pow2_saturating(m * (m - 1) / 2 + m);
        case Subgroup::PI: {
            std::uint64_t order = 1;
            for (int i = 2; i <= m; ++i) order = saturating_mul(order, static_cast<std::uint64_t>(i));
            return order;
        }
    }
    return 0;
}

std::vector<AffineAutomorphism> sample_ensemble(int m, Subgroup g, std::size_t count, Rng& rng, bool distinct,
                                                bool include_identity) {
    if (count == 0) throw ParameterError("ensemble size must be at least 1");
    if (distinct && count > group_order(m, g))
        throw ParameterError("cannot draw " + std::to_string(count) + " distinct elements from " +
                             std::string(to_string(g)) + "(" + std::to_string(m) + ")");
    std::vector<AffineAutomorphism> out;
    out.reserve(count);
    std::set<std::vector<std::uint32_t>> seen;
    auto key = [](const AffineAutomorphism& a) {
        std::vector<std::uint32_t> k(a.matrix().rows().begin(), a.matrix().rows().end());
        k.push_back(a.offset());
        return k;
    };
    if (include_identity) {
        out.push_back(AffineAutomorphism::identity(m));
        seen.insert(key(out.back()));
    }
    while (out.size() < count) {
        auto a = sample(m, g, rng);
        if (distinct && !seen.insert(key(a)).second) continue;
        out.push_back(std::move(a));
    }
    return out;
}

LupFactors mlup_decompose(const AffineAutomorphism& p) {
    const int m = p.dim();
    // Doolittle LUP of B = A^T: P B = L U with L unit lower, U upper.
    const auto b = p.matrix().transposed();
    std::vector<std::uint32_t> u(b.rows().begin(), b.rows().end());
    std::vector<std::uint32_t> l(static_cast<std::size_t>(m), 0u);
    std::vector<int> order(static_cast<std::size_t>(m));
    std::iota(order.begin(), order.end(), 0);
    for (int j = 0; j < m; ++j) {
        int pivot = j;
        while (!((u[pivot] >> j) & 1u)) ++pivot;  // exists: A is invertible
        std::swap(u[j], u[pivot]);
        std::swap(l[j], l[pivot]);
        std::swap(order[j], order[pivot]);
        for (int r = j + 1; r < m; ++r)
            if ((u[r] >> j) & 1u) {
                u[r] ^= u[j];
                l[r] |= 1u << j;
            }
    }
    for (int r = 0; r < m; ++r) l[r] |= 1u << r;
    std::vector<std::uint32_t> perm_rows(static_cast<std::size_t>(m));
    for (int r = 0; r < m; ++r) perm_rows[r] = 1u << order[r];

    // A = (P^-1 L U)^T = U^T L^T P.
    auto lower = gf2::SquareMatrix::from_rows(u).transposed();
    auto upper = gf2::SquareMatrix::from_rows(l).transposed();
    auto perm = gf2::SquareMatrix::from_rows(perm_rows);
    return {AffineAutomorphism(std::move(lower), p.offset()), AffineAutomorphism(std::move(upper), 0),
            AffineAutomorphism(std::move(perm), 0)};
}

}  // namespace aed
