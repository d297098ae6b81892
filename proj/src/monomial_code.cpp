#include "aed/monomial_code.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <sstream>

#include "aed/errors.hpp"

namespace aed {

namespace {

std::uint32_t low_mask(int m) { return m >= 32 ? ~0u : ((1u << m) - 1u); }

void check_log_length(int m) {
    if (m < 0) throw ParameterError("log-length m must be non-negative, got " + std::to_string(m));
    if (m > kMaxLogLength)
        throw CapacityError("log-length m is limited to " + std::to_string(kMaxLogLength) + ", got " +
                            std::to_string(m));
}

// The k highest variables of g, as a mask.
std::uint32_t top_variables(std::uint32_t g, int k) {
    std::uint32_t out = 0;
    while (k-- > 0 && g) {
        const int hi = 31 - __builtin_clz(g);
        out |= 1u << hi;
        g &= ~(1u << hi);
    }
    return out;
}

// Elementwise comparison of sorted variable indices for equal degrees:
// i_k <= j_k for all k iff every prefix {0..t} holds at least as many
// variables of f as of g.
bool dominated_equal_degree(std::uint32_t f, std::uint32_t g) {
    int balance = 0;
    for (int t = 0; t < 32; ++t) {
        balance += static_cast<int>((f >> t) & 1u) - static_cast<int>((g >> t) & 1u);
        if (balance < 0) return false;
    }
    return true;
}

}  // namespace

Monomial monomial_of_index(std::uint32_t index, int m) { return Monomial{~index & low_mask(m)}; }

std::uint32_t index_of_monomial(Monomial f, int m) { return ~f.mask & low_mask(m); }

bool precedes(Monomial f, Monomial g) {
    const int df = f.degree();
    const int dg = g.degree();
    if (df > dg) return false;
    // Taking the deg(f) largest variables of g gives the divisor that
    // dominates every other candidate position by position.
    const std::uint32_t witness = df == dg ? g.mask : top_variables(g.mask, df);
    return dominated_equal_degree(f.mask, witness);
}

MonomialSet::MonomialSet(int m, std::vector<Monomial> members) : m_(m), members_(std::move(members)) {
    check_log_length(m);
    for (auto f : members_)
        if (f.mask & ~low_mask(m)) throw ParameterError("monomial uses a variable beyond m");
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

bool MonomialSet::contains(Monomial f) const { return std::binary_search(members_.begin(), members_.end(), f); }

bool MonomialSet::is_subset_of(const MonomialSet& other) const {
    return std::includes(other.members_.begin(), other.members_.end(), members_.begin(), members_.end());
}

CodeSpec::CodeSpec(int m, BitVector frozen, CodeFamily family, std::optional<int> rm_order)
    : m_(m), frozen_(std::move(frozen)), family_(family), rm_order_(rm_order) {
    for (std::uint32_t i = 0; i < frozen_.size(); ++i)
        if (!frozen_[i]) info_.push_back(i);
}

MonomialSet CodeSpec::monomials() const {
    std::vector<Monomial> members;
    members.reserve(info_.size());
    for (auto i : info_) members.push_back(monomial_of_index(i, m_));
    return MonomialSet(m_, std::move(members));
}

gf2::DenseMatrix CodeSpec::generator() const {
    const std::size_t n = length();
    gf2::DenseMatrix g(info_.size(), n);
    // Row i of G_N has a one in column j iff the bits of j are a subset of the bits of i.
    for (std::size_t r = 0; r < info_.size(); ++r)
        for (std::uint32_t j = 0; j < n; ++j)
            if ((j & ~info_[r]) == 0) g.set(r, j, true);
    return g;
}

std::string CodeSpec::name() const {
    if (rm_order_) return "RM_" + std::to_string(*rm_order_) + "_" + std::to_string(m_);
    return "polar_" + std::to_string(m_) + "_" + std::to_string(dimension());
}

std::size_t rm_dimension(int r, int m) {
    std::size_t k = 0;
    std::size_t binom = 1;
    for (int i = 0; i <= r && i <= m; ++i) {
        if (i > 0) binom = binom * static_cast<std::size_t>(m - i + 1) / static_cast<std::size_t>(i);
        k += binom;
    }
    return k;
}

CodeSpec rm_code(int r, int m) {
    check_log_length(m);
    if (r < 0 || r > m)
        throw ParameterError("RM order r must satisfy 0 <= r <= m, got r=" + std::to_string(r) +
                             ", m=" + std::to_string(m));
    const std::size_t n = std::size_t{1} << m;
    BitVector frozen(n);
    for (std::size_t i = 0; i < n; ++i) frozen[i] = __builtin_popcountll(i) < m - r ? 1 : 0;
    return CodeSpec(m, std::move(frozen), CodeFamily::ReedMuller, r);
}

CodeSpec polar_code(int m, std::span<const std::uint8_t> frozen) {
    check_log_length(m);
    if (frozen.size() != (std::size_t{1} << m))
        throw ParameterError("frozen indicator has length " + std::to_string(frozen.size()) + ", expected 2^" +
                             std::to_string(m));
    for (auto f : frozen)
        if (f > 1) throw ParameterError("frozen indicator entries must be 0 or 1");
    return CodeSpec(m, BitVector(frozen.begin(), frozen.end()), CodeFamily::Polar, std::nullopt);
}

CodeSpec code_from_monomials(const MonomialSet& monomials) {
    const int m = monomials.m();
    const std::size_t n = std::size_t{1} << m;
    BitVector frozen(n, 1);
    for (auto f : monomials.members()) frozen[index_of_monomial(f, m)] = 0;
    return polar_code(m, frozen);
}

bool is_decreasing(const CodeSpec& spec) {
    // The order is generated by two elementary steps: dropping a variable,
    // and replacing z_j by z_{j-1} when z_{j-1} is absent. Closure under both
    // is equivalent to downward closure.
    const int m = spec.m();
    const auto monomials = spec.monomials();
    for (auto g : monomials.members()) {
        for (int j = 0; j < m; ++j) {
            if (!((g.mask >> j) & 1u)) continue;
            if (!monomials.contains(Monomial{g.mask & ~(1u << j)})) return false;
            if (j > 0 && !((g.mask >> (j - 1)) & 1u) &&
                !monomials.contains(Monomial{(g.mask & ~(1u << j)) | (1u << (j - 1))}))
                return false;
        }
    }
    return true;
}

void polar_transform(std::span<std::uint8_t> v) {
    const std::size_t n = v.size();
    for (std::size_t h = 1; h < n; h *= 2)
        for (std::size_t i = 0; i < n; i += 2 * h)
            for (std::size_t j = i; j < i + h; ++j) v[j] ^= v[j + h];
}

BitVector encode(const CodeSpec& spec, std::span<const std::uint8_t> message) {
    if (spec.dimension() == 0) throw ParameterError("cannot encode with an empty code (k = 0)");
    if (message.size() != spec.dimension())
        throw ParameterError("message has length " + std::to_string(message.size()) + ", expected k=" +
                             std::to_string(spec.dimension()));
    BitVector x(spec.length(), 0);
    const auto info = spec.info_indices();
    for (std::size_t t = 0; t < info.size(); ++t) x[info[t]] = message[t] & 1u;
    polar_transform(x);
    return x;
}

BitVector extract_message(const CodeSpec& spec, std::span<const std::uint8_t> word) {
    if (word.size() != spec.length()) throw ParameterError("word length does not match code length");
    BitVector v(word.begin(), word.end());
    polar_transform(v);
    BitVector u;
    u.reserve(spec.dimension());
    for (auto i : spec.info_indices()) u.push_back(v[i]);
    return u;
}

bool is_codeword(const CodeSpec& spec, std::span<const std::uint8_t> word) {
    if (word.size() != spec.length()) throw ParameterError("word length does not match code length");
    BitVector v(word.begin(), word.end());
    polar_transform(v);
    for (std::size_t i = 0; i < v.size(); ++i)
        if (spec.is_frozen(i) && v[i]) return false;
    return true;
}

ParityCheck::ParityCheck(const CodeSpec& spec) : length_(spec.length()), h_(spec.generator().null_space()) {}

bool ParityCheck::contains(std::span<const std::uint8_t> word) const {
    if (word.size() != length_) throw ParameterError("word length does not match code length");
    for (auto s : h_.multiply(word))
        if (s) return false;
    return true;
}

std::pair<CodeSpec, CodeSpec> split_subcodes(const CodeSpec& spec) {
    if (spec.m() < 1) throw ParameterError("cannot split a code of length 1");
    const std::size_t half = spec.length() / 2;
    const auto& frozen = spec.frozen();
    std::span<const std::uint8_t> all(frozen);
    return {polar_code(spec.m() - 1, all.first(half)), polar_code(spec.m() - 1, all.subspan(half))};
}

PlotkinSplit::PlotkinSplit(const CodeSpec& spec)
    : upper_(split_subcodes(spec).first),
      lower_(split_subcodes(spec).second),
      upper_check_(upper_),
      lower_check_(lower_),
      hadamard_check_(rm_code(std::min(1, spec.m() - 1), spec.m() - 1)) {}

bool PlotkinSplit::product_in_lower(std::span<const std::uint8_t> xu, std::span<const std::uint8_t> xrm) const {
    const std::size_t half = upper_.length();
    if (xu.size() != half || xrm.size() != half)
        throw ParameterError("subcode words must have length N/2 = " + std::to_string(half));
    if (!upper_check_.contains(xu)) throw PreconditionError("xu is not a codeword of the upper subcode");
    if (!hadamard_check_.contains(xrm)) throw PreconditionError("xrm is not a codeword of RM(1, m-1)");
    BitVector product(half);
    for (std::size_t i = 0; i < half; ++i) product[i] = xu[i] & xrm[i];
    return lower_check_.contains(product);
}

bool pointwise_product_in_lower(const CodeSpec& spec, std::span<const std::uint8_t> xu,
                                std::span<const std::uint8_t> xrm) {
    return PlotkinSplit(spec).product_in_lower(xu, xrm);
}

std::vector<BitVector> enumerate_codebook(const CodeSpec& spec) {
    const std::size_t k = spec.dimension();
    if (k > static_cast<std::size_t>(kMaxEnumerableDimension))
        throw CapacityError("codebook enumeration limited to k <= " + std::to_string(kMaxEnumerableDimension) +
                            ", got k=" + std::to_string(k));
    if (k == 0) return {BitVector(spec.length(), 0)};
    std::vector<BitVector> words;
    words.reserve(std::size_t{1} << k);
    BitVector u(k);
    for (std::size_t c = 0; c < (std::size_t{1} << k); ++c) {
        for (std::size_t t = 0; t < k; ++t) u[t] = (c >> t) & 1u;
        words.push_back(encode(spec, u));
    }
    return words;
}

std::string format_frozen(const CodeSpec& spec) {
    return "m=" + std::to_string(spec.m()) + "\n" + to_string(spec.frozen()) + "\n";
}

CodeSpec parse_frozen(std::istream& in) {
    std::string header;
    std::string pattern;
    if (!std::getline(in, header) || header.rfind("m=", 0) != 0)
        throw ParameterError("frozen-set file must start with a line 'm=<int>'");
    int m = 0;
    try {
        std::size_t used = 0;
        m = std::stoi(header.substr(2), &used);
        if (2 + used != header.size() && header.find_first_not_of(" \r", 2 + used) != std::string::npos)
            throw ParameterError("trailing characters after m");
    } catch (const std::logic_error&) {
        throw ParameterError("cannot parse '" + header + "' as 'm=<int>'");
    }
    if (!std::getline(in, pattern)) throw ParameterError("frozen-set file is missing the pattern line");
    while (!pattern.empty() && (pattern.back() == '\r' || pattern.back() == ' ')) pattern.pop_back();
    check_log_length(m);
    BitVector frozen(pattern.size());
    for (std::size_t i = 0; i < pattern.size(); ++i) {
        if (pattern[i] != '0' && pattern[i] != '1')
            throw ParameterError("frozen pattern may only contain '0' and '1'");
        frozen[i] = pattern[i] == '1' ? 1 : 0;
    }
    return polar_code(m, frozen);
}

CodeSpec read_frozen_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParameterError("cannot open frozen-set file '" + path + "'");
    return parse_frozen(in);
}

void write_frozen_file(const CodeSpec& spec, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParameterError("cannot write frozen-set file '" + path + "'");
    out << format_frozen(spec);
}

}  // namespace aed
