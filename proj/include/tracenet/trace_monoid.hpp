#pragma once

#include "tracenet/polynomial.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace tracenet {

using Letter = std::uint32_t;

inline constexpr std::size_t kDefaultMaxCliques = std::size_t{1} << 16;
inline constexpr std::size_t kDefaultMaxEnumerationLength = 10;

/// Alphabet with a symmetric, irreflexive independence relation. Letter
/// indices follow the order in which names were given.
class TraceMonoid {
public:
    TraceMonoid() = default;
    /// Throws std::invalid_argument on duplicate names, out-of-range or
    /// reflexive pairs. Pairs are symmetrised.
    TraceMonoid(std::vector<std::string> alphabet,
                const std::vector<std::pair<Letter, Letter>>& independent_pairs);

    [[nodiscard]] std::size_t size() const { return names_.size(); }
    [[nodiscard]] const std::string& name(Letter a) const { return names_.at(a); }
    [[nodiscard]] const std::vector<std::string>& names() const { return names_; }
    /// Throws std::out_of_range("unknown letter ...").
    [[nodiscard]] Letter letter(std::string_view name) const;

    [[nodiscard]] bool independent(Letter a, Letter b) const {
        return indep_[static_cast<std::size_t>(a) * names_.size() + b] != 0;
    }
    /// Unordered pairs (a, b) with a < b.
    [[nodiscard]] std::vector<std::pair<Letter, Letter>> independent_pairs() const;

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, Letter> index_;
    std::vector<std::uint8_t> indep_;
};

/// Non-empty set of pairwise independent letters, stored sorted.
struct Clique {
    std::vector<Letter> letters;

    [[nodiscard]] std::size_t size() const { return letters.size(); }
    [[nodiscard]] bool contains(Letter a) const;

    friend bool operator==(const Clique&, const Clique&) = default;
    /// Graded lexicographic: by size, then by letter indices.
    friend bool operator<(const Clique& a, const Clique& b);
};

/// A trace stored as its Cartier-Foata normal sequence of cliques. The empty
/// sequence is the identity.
struct Trace {
    std::vector<Clique> cliques;

    [[nodiscard]] bool empty() const { return cliques.empty(); }
    [[nodiscard]] std::size_t length() const;

    friend bool operator==(const Trace&, const Trace&) = default;
};

[[nodiscard]] bool is_clique(const TraceMonoid& m, std::span<const Letter> letters);

/// All non-empty cliques of the independence graph in graded-lex order.
/// Throws CapExceeded beyond `max_cliques`.
std::vector<Clique> cliques(const TraceMonoid& m, std::size_t max_cliques = kDefaultMaxCliques);

/// gamma -> delta: every letter of delta depends on some letter of gamma.
[[nodiscard]] bool is_normal_pair(const TraceMonoid& m, const Clique& gamma, const Clique& delta);

/// Cliques together with the normal-pair relation between them.
struct CliqueGraph {
    std::vector<Clique> cliques;
    /// follows[i][j] is true iff cliques[i] -> cliques[j].
    std::vector<std::vector<char>> follows;

    [[nodiscard]] std::optional<std::size_t> index_of(const Clique& c) const;
};

CliqueGraph clique_graph(const TraceMonoid& m, std::size_t max_cliques = kDefaultMaxCliques);

/// Cartier-Foata normal form of a word, by heap insertion.
Trace normalize(const TraceMonoid& m, std::span<const Letter> word);
/// Splits `word` on whitespace if it contains any, otherwise reads one
/// letter per character. Throws std::out_of_range on unknown letters.
std::vector<Letter> parse_word(const TraceMonoid& m, std::string_view word);
/// Letters of each clique in turn; a canonical representative word.
std::vector<Letter> linearize(const Trace& x);

bool trace_equal(const TraceMonoid& m, std::span<const Letter> w1, std::span<const Letter> w2);
Trace concat(const TraceMonoid& m, const Trace& x, const Trace& y);
/// x <= xi in the left divisibility order.
bool is_prefix(const TraceMonoid& m, const Trace& x, const Trace& xi);
/// Least common upper bound, or nullopt when x and y have none.
std::optional<Trace> trace_lub(const TraceMonoid& m, const Trace& x, const Trace& y);

IntPolynomial mobius_polynomial(const TraceMonoid& m, std::size_t max_cliques = kDefaultMaxCliques);
/// lambda(0..n) from mu(z) G(z) = 1.
std::vector<std::int64_t> growth_coefficients(const TraceMonoid& m, std::size_t n,
                                              std::size_t max_cliques = kDefaultMaxCliques);

/// Every trace of length <= n exactly once (DFS over normal sequences,
/// epsilon first). Throws CapExceeded if n > max_length.
std::vector<Trace> enumerate_traces(const TraceMonoid& m, std::size_t n,
                                    std::size_t max_length = kDefaultMaxEnumerationLength,
                                    std::size_t max_cliques = kDefaultMaxCliques);
/// Same walk as enumerate_traces but only counts traces per length.
std::vector<std::uint64_t> count_traces(const TraceMonoid& m, std::size_t n,
                                        std::size_t max_length = kDefaultMaxEnumerationLength,
                                        std::size_t max_cliques = kDefaultMaxCliques);

/// "ad", or "t1+t2" when some letter name is longer than one character.
std::string clique_label(const TraceMonoid& m, const Clique& c);
std::vector<std::string> clique_names(const TraceMonoid& m, const Clique& c);
/// "(ad)(be)(c)"; "()" for the empty trace.
std::string trace_label(const TraceMonoid& m, const Trace& x);

} // namespace tracenet
