#include "tracenet/trace_monoid.hpp"

#include "tracenet/error.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <stdexcept>

namespace tracenet {

TraceMonoid::TraceMonoid(std::vector<std::string> alphabet,
                         const std::vector<std::pair<Letter, Letter>>& independent_pairs)
    : names_(std::move(alphabet)), indep_(names_.size() * names_.size(), 0) {
    for (std::size_t i = 0; i < names_.size(); ++i)
        if (!index_.emplace(names_[i], static_cast<Letter>(i)).second)
            throw std::invalid_argument("duplicate letter '" + names_[i] + "'");
    const auto n = names_.size();
    for (auto [a, b] : independent_pairs) {
        if (a >= n || b >= n) throw std::invalid_argument("independence pair references an unknown letter");
        if (a == b) throw std::invalid_argument("independence relation must be irreflexive");
        indep_[a * n + b] = 1;
        indep_[b * n + a] = 1;
    }
}

Letter TraceMonoid::letter(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) throw std::out_of_range("unknown letter '" + std::string(name) + "'");
    return it->second;
}

std::vector<std::pair<Letter, Letter>> TraceMonoid::independent_pairs() const {
    std::vector<std::pair<Letter, Letter>> out;
    for (Letter a = 0; a < size(); ++a)
        for (Letter b = a + 1; b < size(); ++b)
            if (independent(a, b)) out.emplace_back(a, b);
    return out;
}

bool Clique::contains(Letter a) const {
    return std::binary_search(letters.begin(), letters.end(), a);
}

bool operator<(const Clique& a, const Clique& b) {
    if (a.letters.size() != b.letters.size()) return a.letters.size() < b.letters.size();
    return a.letters < b.letters;
}

std::size_t Trace::length() const {
    std::size_t n = 0;
    for (const auto& c : cliques) n += c.size();
    return n;
}

bool is_clique(const TraceMonoid& m, std::span<const Letter> letters) {
    if (letters.empty()) return false;
    for (std::size_t i = 0; i < letters.size(); ++i)
        for (std::size_t j = i + 1; j < letters.size(); ++j)
            if (!m.independent(letters[i], letters[j])) return false;
    return true;
}

std::vector<Clique> cliques(const TraceMonoid& m, std::size_t max_cliques) {
    std::vector<Clique> out;
    std::vector<Letter> current;
    auto extend = [&](auto&& self, Letter from) -> void {
        for (Letter a = from; a < m.size(); ++a) {
            bool ok = std::all_of(current.begin(), current.end(), [&](Letter b) { return m.independent(a, b); });
            if (!ok) continue;
            current.push_back(a);
            if (out.size() >= max_cliques)
                throw CapExceeded("clique count exceeds cap " + std::to_string(max_cliques));
            out.push_back(Clique{current});
            self(self, a + 1);
            current.pop_back();
        }
    };
    extend(extend, 0);
    std::sort(out.begin(), out.end());
    return out;
}

bool is_normal_pair(const TraceMonoid& m, const Clique& gamma, const Clique& delta) {
    return std::all_of(delta.letters.begin(), delta.letters.end(), [&](Letter b) {
        return std::any_of(gamma.letters.begin(), gamma.letters.end(),
                           [&](Letter a) { return !m.independent(a, b); });
    });
}

std::optional<std::size_t> CliqueGraph::index_of(const Clique& c) const {
    auto it = std::lower_bound(cliques.begin(), cliques.end(), c);
    if (it == cliques.end() || !(*it == c)) return std::nullopt;
    return static_cast<std::size_t>(it - cliques.begin());
}

CliqueGraph clique_graph(const TraceMonoid& m, std::size_t max_cliques) {
    CliqueGraph g;
    g.cliques = cliques(m, max_cliques);
    const auto n = g.cliques.size();
    g.follows.assign(n, std::vector<char>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) g.follows[i][j] = is_normal_pair(m, g.cliques[i], g.cliques[j]);
    return g;
}

Trace normalize(const TraceMonoid& m, std::span<const Letter> word) {
    Trace x;
    for (Letter a : word) {
        if (a >= m.size()) throw std::out_of_range("unknown letter index " + std::to_string(a));
        // a settles just above the highest clique holding a letter it depends on
        std::size_t level = 0;
        for (std::size_t i = x.cliques.size(); i-- > 0;) {
            const auto& ls = x.cliques[i].letters;
            if (std::any_of(ls.begin(), ls.end(), [&](Letter b) { return !m.independent(a, b); })) {
                level = i + 1;
                break;
            }
        }
        if (level == x.cliques.size()) {
            x.cliques.push_back(Clique{{a}});
        } else {
            auto& ls = x.cliques[level].letters;
            ls.insert(std::upper_bound(ls.begin(), ls.end(), a), a);
        }
    }
    return x;
}

std::vector<Letter> parse_word(const TraceMonoid& m, std::string_view word) {
    std::vector<Letter> out;
    bool spaced = std::any_of(word.begin(), word.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
    if (!spaced) {
        for (char c : word) out.push_back(m.letter(std::string(1, c)));
        return out;
    }
    std::size_t i = 0;
    while (i < word.size()) {
        while (i < word.size() && std::isspace(static_cast<unsigned char>(word[i]))) ++i;
        std::size_t j = i;
        while (j < word.size() && !std::isspace(static_cast<unsigned char>(word[j]))) ++j;
        if (j > i) out.push_back(m.letter(word.substr(i, j - i)));
        i = j;
    }
    return out;
}

std::vector<Letter> linearize(const Trace& x) {
    std::vector<Letter> w;
    for (const auto& c : x.cliques) w.insert(w.end(), c.letters.begin(), c.letters.end());
    return w;
}

bool trace_equal(const TraceMonoid& m, std::span<const Letter> w1, std::span<const Letter> w2) {
    return normalize(m, w1) == normalize(m, w2);
}

Trace concat(const TraceMonoid& m, const Trace& x, const Trace& y) {
    auto w = linearize(x);
    auto wy = linearize(y);
    w.insert(w.end(), wy.begin(), wy.end());
    return normalize(m, w);
}

bool is_prefix(const TraceMonoid& m, const Trace& x, const Trace& xi) {
    auto w = linearize(xi);
    for (Letter a : linearize(x)) {
        auto it = std::find(w.begin(), w.end(), a);
        if (it == w.end()) return false;
        bool blocked = std::any_of(w.begin(), it, [&](Letter b) { return !m.independent(a, b); });
        if (blocked) return false;
        w.erase(it);
    }
    return true;
}

namespace {

std::vector<Letter> project(std::span<const Letter> w, Letter a, Letter b) {
    std::vector<Letter> out;
    for (Letter c : w)
        if (c == a || c == b) out.push_back(c);
    return out;
}

bool is_word_prefix(const std::vector<Letter>& p, const std::vector<Letter>& w) {
    return p.size() <= w.size() && std::equal(p.begin(), p.end(), w.begin());
}

} // namespace

std::optional<Trace> trace_lub(const TraceMonoid& m, const Trace& x, const Trace& y) {
    const auto wx = linearize(x);
    const auto wy = linearize(y);
    const auto n = static_cast<Letter>(m.size());

    // Projections onto every dependent pair {a, b}, a <= b (a == b gives the
    // occurrence count of a). Keep the longer one when they are comparable.
    struct Projection {
        Letter a, b;
        std::vector<Letter> word;
        std::size_t pos = 0;
    };
    std::vector<Projection> target;
    std::vector<std::vector<std::size_t>> by_letter(n);
    std::size_t total = 0;
    for (Letter a = 0; a < n; ++a) {
        for (Letter b = a; b < n; ++b) {
            if (a != b && m.independent(a, b)) continue;
            auto px = project(wx, a, b);
            auto py = project(wy, a, b);
            if (!is_word_prefix(px, py) && !is_word_prefix(py, px)) return std::nullopt;
            auto& longer = px.size() >= py.size() ? px : py;
            if (a == b) total += longer.size();
            by_letter[a].push_back(target.size());
            if (a != b) by_letter[b].push_back(target.size());
            target.push_back({a, b, std::move(longer), 0});
        }
    }

    std::vector<Letter> word;
    while (word.size() < total) {
        bool emitted = false;
        for (Letter c = 0; c < n && !emitted; ++c) {
            bool ready = !by_letter[c].empty() && std::all_of(by_letter[c].begin(), by_letter[c].end(), [&](std::size_t k) {
                const auto& p = target[k];
                return p.pos < p.word.size() && p.word[p.pos] == c;
            });
            if (!ready) continue;
            for (auto k : by_letter[c]) ++target[k].pos;
            word.push_back(c);
            emitted = true;
        }
        if (!emitted) return std::nullopt;
    }
    Trace z = normalize(m, word);
    if (!is_prefix(m, x, z) || !is_prefix(m, y, z)) return std::nullopt;
    return z;
}

IntPolynomial mobius_polynomial(const TraceMonoid& m, std::size_t max_cliques) {
    std::vector<IntPolynomial::Coefficient> coeffs{1};
    for (const auto& c : cliques(m, max_cliques)) {
        if (coeffs.size() <= c.size()) coeffs.resize(c.size() + 1, 0);
        coeffs[c.size()] += (c.size() % 2 == 0) ? 1 : -1;
    }
    return IntPolynomial(std::move(coeffs));
}

std::vector<std::int64_t> growth_coefficients(const TraceMonoid& m, std::size_t n, std::size_t max_cliques) {
    const auto mu = mobius_polynomial(m, max_cliques);
    std::vector<std::int64_t> lambda(n + 1, 0);
    lambda[0] = 1;
    for (std::size_t k = 1; k <= n; ++k) {
        std::int64_t acc = 0;
        for (std::size_t j = 1; j <= k && static_cast<int>(j) <= mu.degree(); ++j) {
            std::int64_t term;
            if (__builtin_mul_overflow(mu[j], lambda[k - j], &term) || __builtin_sub_overflow(acc, term, &acc))
                throw std::overflow_error("growth coefficient overflow at k = " + std::to_string(k));
        }
        lambda[k] = acc;
    }
    return lambda;
}

namespace {

template <class Visit>
void walk_normal_sequences(const CliqueGraph& g, std::size_t n, Visit&& visit) {
    std::vector<std::size_t> path;
    auto dfs = [&](auto&& self, std::size_t last, std::size_t len) -> void {
        for (std::size_t j = 0; j < g.cliques.size(); ++j) {
            if (!g.follows[last][j]) continue;
            const auto next_len = len + g.cliques[j].size();
            if (next_len > n) continue;
            path.push_back(j);
            visit(path, next_len);
            self(self, j, next_len);
            path.pop_back();
        }
    };
    for (std::size_t i = 0; i < g.cliques.size(); ++i) {
        if (g.cliques[i].size() > n) continue;
        path.push_back(i);
        visit(path, g.cliques[i].size());
        dfs(dfs, i, g.cliques[i].size());
        path.pop_back();
    }
}

} // namespace

std::vector<Trace> enumerate_traces(const TraceMonoid& m, std::size_t n, std::size_t max_length,
                                    std::size_t max_cliques) {
    if (n > max_length) throw CapExceeded("enumeration length " + std::to_string(n) + " exceeds cap " + std::to_string(max_length));
    const auto g = clique_graph(m, max_cliques);
    std::vector<Trace> out{Trace{}};
    walk_normal_sequences(g, n, [&](const std::vector<std::size_t>& path, std::size_t) {
        Trace x;
        for (auto i : path) x.cliques.push_back(g.cliques[i]);
        out.push_back(std::move(x));
    });
    return out;
}

std::vector<std::uint64_t> count_traces(const TraceMonoid& m, std::size_t n, std::size_t max_length,
                                        std::size_t max_cliques) {
    if (n > max_length) throw CapExceeded("enumeration length " + std::to_string(n) + " exceeds cap " + std::to_string(max_length));
    const auto g = clique_graph(m, max_cliques);
    std::vector<std::uint64_t> counts(n + 1, 0);
    counts[0] = 1;
    walk_normal_sequences(g, n, [&](const std::vector<std::size_t>&, std::size_t len) { ++counts[len]; });
    return counts;
}

std::vector<std::string> clique_names(const TraceMonoid& m, const Clique& c) {
    std::vector<std::string> out;
    for (auto a : c.letters) out.push_back(m.name(a));
    return out;
}

std::string clique_label(const TraceMonoid& m, const Clique& c) {
    bool compact = std::all_of(m.names().begin(), m.names().end(), [](const std::string& s) { return s.size() == 1; });
    std::string out;
    for (std::size_t i = 0; i < c.letters.size(); ++i) {
        if (i > 0 && !compact) out += '+';
        out += m.name(c.letters[i]);
    }
    return out;
}

std::string trace_label(const TraceMonoid& m, const Trace& x) {
    if (x.empty()) return "()";
    std::string out;
    for (const auto& c : x.cliques) out += "(" + clique_label(m, c) + ")";
    return out;
}

} // namespace tracenet
