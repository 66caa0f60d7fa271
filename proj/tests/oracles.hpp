#pragma once

// Brute-force reference computations for the tests. Everything here works on
// plain words and the net's firing rule, never on cliques or normal forms, so
// it shares no code path with the library routines it checks.

#include "tracenet/petri_net.hpp"
#include "tracenet/polynomial.hpp"
#include "tracenet/trace_monoid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <set>
#include <vector>

namespace oracle {

using tracenet::Letter;
using Word = std::vector<Letter>;

/// Every word equivalent to w, by closing under swaps of adjacent
/// independent letters.
inline std::set<Word> word_class(const tracenet::TraceMonoid& m, const Word& w) {
    std::set<Word> seen{w};
    std::queue<Word> todo;
    todo.push(w);
    while (!todo.empty()) {
        Word cur = todo.front();
        todo.pop();
        for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
            if (!m.independent(cur[i], cur[i + 1])) continue;
            std::swap(cur[i], cur[i + 1]);
            if (seen.insert(cur).second) todo.push(cur);
            std::swap(cur[i], cur[i + 1]);
        }
    }
    return seen;
}

inline bool equivalent(const tracenet::TraceMonoid& m, const Word& a, const Word& b) {
    if (a.size() != b.size()) return false;
    return word_class(m, a).count(b) > 0;
}

/// x is a prefix of xi: some representative of xi starts with a
/// representative of x.
inline bool prefix(const tracenet::TraceMonoid& m, const Word& x, const Word& xi) {
    if (x.size() > xi.size()) return false;
    const auto xs = word_class(m, x);
    for (const auto& w : word_class(m, xi))
        if (xs.count(Word(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(x.size())))) return true;
    return false;
}

/// Appending a to a lexicographically minimal representative keeps it
/// minimal unless a could slide left past a block of letters independent of
/// it, starting with a larger letter.
inline bool lex_extends(const tracenet::TraceMonoid& m, const Word& w, Letter a) {
    for (std::size_t j = w.size(); j-- > 0;) {
        if (!m.independent(w[j], a)) return true;
        if (w[j] > a) return false;
    }
    return true;
}

/// Calls visit(word) on the lexicographically minimal representative of
/// every trace of length <= n (one per trace).
inline void for_each_trace_word(const tracenet::TraceMonoid& m, std::size_t n,
                                const std::function<void(const Word&)>& visit) {
    Word w;
    std::function<void()> rec = [&] {
        visit(w);
        if (w.size() == n) return;
        for (Letter a = 0; a < m.size(); ++a) {
            if (!lex_extends(m, w, a)) continue;
            w.push_back(a);
            rec();
            w.pop_back();
        }
    };
    rec();
}

inline std::vector<std::uint64_t> trace_counts(const tracenet::TraceMonoid& m, std::size_t n) {
    std::vector<std::uint64_t> out(n + 1, 0);
    for_each_trace_word(m, n, [&](const Word& w) { ++out[w.size()]; });
    return out;
}

/// Distinct equivalence classes among all words of length k.
inline std::uint64_t class_count(const tracenet::TraceMonoid& m, std::size_t k) {
    std::set<Word> reps;
    Word w(k, 0);
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == k) {
            reps.insert(*word_class(m, w).begin());
            return;
        }
        for (Letter a = 0; a < m.size(); ++a) {
            w[i] = a;
            rec(i + 1);
        }
    };
    rec(0);
    return reps.size();
}

/// Marking reached by firing w from `from`, or nullopt once some letter is
/// not enabled.
inline std::optional<tracenet::Marking> replay(const tracenet::PetriNet& net, tracenet::Marking from, const Word& w) {
    for (auto t : w) {
        if (!tracenet::enables(net, from, t)) return std::nullopt;
        from = tracenet::fire(net, from, t);
    }
    return from;
}

/// Determinant by the Leibniz permutation sum.
inline tracenet::IntPolynomial leibniz_determinant(const tracenet::PolyMatrix& a) {
    const auto n = a.size();
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    tracenet::IntPolynomial det;
    do {
        int inversions = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (perm[i] > perm[j]) ++inversions;
        tracenet::IntPolynomial term{inversions % 2 == 0 ? 1 : -1};
        for (std::size_t i = 0; i < n; ++i) term *= a[i][perm[i]];
        det += term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return det;
}

/// Plain bisection for a sign change of p on [lo, hi].
inline double bisect(const tracenet::IntPolynomial& p, double lo, double hi) {
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if ((p(lo) > 0) == (p(mid) > 0)) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

inline const double kSqrt2 = std::sqrt(2.0);

} // namespace oracle
