#include "tracenet/async_system.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace tracenet {

AsyncSystem::AsyncSystem(TraceMonoid monoid, std::vector<std::string> state_labels,
                         std::vector<std::vector<StateOrSink>> letter_action, std::size_t max_cliques)
    : monoid_(std::move(monoid)), labels_(std::move(state_labels)), letter_action_(std::move(letter_action)) {
    const auto n = labels_.size();
    if (letter_action_.size() != n) throw std::invalid_argument("action table has wrong number of rows");
    for (const auto& row : letter_action_) {
        if (row.size() != monoid_.size()) throw std::invalid_argument("action table has wrong number of columns");
        for (const auto& t : row)
            if (t && *t >= n) throw std::invalid_argument("action table references an unknown state");
    }

    auto step = [&](StateOrSink s, Letter a) -> StateOrSink { return s ? letter_action_[*s][a] : std::nullopt; };
    for (std::size_t s = 0; s < n; ++s) {
        for (auto [a, b] : monoid_.independent_pairs()) {
            if (step(step(s, a), b) != step(step(s, b), a)) {
                throw std::logic_error("action is not well defined: " + labels_[s] + "." + monoid_.name(a) +
                                       monoid_.name(b) + " differs from " + labels_[s] + "." + monoid_.name(b) +
                                       monoid_.name(a));
            }
        }
    }

    graph_ = tracenet::clique_graph(monoid_, max_cliques);
    clique_action_.assign(n, std::vector<StateOrSink>(graph_.cliques.size()));
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t c = 0; c < graph_.cliques.size(); ++c) {
            StateOrSink cur = s;
            for (Letter a : graph_.cliques[c].letters) cur = step(cur, a);
            clique_action_[s][c] = cur;
        }
    }
}

void AsyncSystem::attach_markings(std::vector<Marking> markings) {
    if (markings.size() != labels_.size()) throw std::invalid_argument("one marking per state expected");
    markings_ = std::move(markings);
}

AsyncSystem build_system(const PetriNet& net, const ReachabilityGraph& graph, std::size_t max_cliques) {
    const auto n = graph.markings.size();
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) labels.push_back("M" + std::to_string(i));
    std::vector<std::vector<StateOrSink>> table(n, std::vector<StateOrSink>(net.transitions().size()));
    for (const auto& e : graph.edges) table[e.from][e.transition] = e.to;
    AsyncSystem sys(independence_alphabet(net), std::move(labels), std::move(table), max_cliques);
    sys.attach_markings(graph.markings);
    return sys;
}

StateOrSink act(const AsyncSystem& sys, std::size_t s, std::span<const Letter> word) {
    StateOrSink cur = s;
    for (Letter a : word) {
        if (!cur) break;
        cur = sys.letter_action(*cur, a);
    }
    return cur;
}

StateOrSink act(const AsyncSystem& sys, std::size_t s, const Trace& x) {
    auto w = linearize(x);
    return act(sys, s, std::span<const Letter>(w));
}

bool is_irreducible(const AsyncSystem& sys) {
    const auto n = sys.state_count();
    if (n == 0) return false;
    std::vector<std::vector<std::size_t>> succ(n), pred(n);
    for (std::size_t s = 0; s < n; ++s)
        for (Letter a = 0; a < sys.monoid().size(); ++a)
            if (auto t = sys.letter_action(s, a)) {
                succ[s].push_back(*t);
                pred[*t].push_back(s);
            }
    if (n == 1) return !succ[0].empty();

    auto reaches_all = [&](const std::vector<std::vector<std::size_t>>& adj) {
        std::vector<char> seen(n, 0);
        std::vector<std::size_t> stack{0};
        seen[0] = 1;
        std::size_t count = 1;
        while (!stack.empty()) {
            auto s = stack.back();
            stack.pop_back();
            for (auto t : adj[s])
                if (!seen[t]) {
                    seen[t] = 1;
                    ++count;
                    stack.push_back(t);
                }
        }
        return count == n;
    };
    return reaches_all(succ) && reaches_all(pred);
}

PolyMatrix mobius_matrix(const AsyncSystem& sys) {
    const auto n = sys.state_count();
    PolyMatrix m(n, std::vector<IntPolynomial>(n));
    for (std::size_t s = 0; s < n; ++s) {
        m[s][s] += IntPolynomial{1};
        for (std::size_t c = 0; c < sys.cliques().size(); ++c) {
            if (auto t = sys.clique_action(s, c)) {
                const auto k = sys.cliques()[c].size();
                m[s][*t] += IntPolynomial::monomial(k % 2 == 0 ? 1 : -1, k);
            }
        }
    }
    return m;
}

GrowthTable growth_matrix_coefficients(const AsyncSystem& sys, std::size_t n) {
    const auto states = sys.state_count();
    const auto& g = sys.clique_graph();
    const auto nc = g.cliques.size();
    GrowthTable out(states, std::vector<std::vector<std::int64_t>>(states, std::vector<std::int64_t>(n + 1, 0)));

    auto add = [](std::int64_t& acc, std::int64_t v) {
        if (__builtin_add_overflow(acc, v, &acc)) throw std::overflow_error("growth matrix coefficient overflow");
    };

    for (std::size_t s = 0; s < states; ++s) {
        out[s][s][0] = 1;
        // ways[len][clique][state]: normal sequences from s of total length
        // len, ending with clique, reaching state.
        std::vector<std::vector<std::vector<std::int64_t>>> ways(
            n + 1, std::vector<std::vector<std::int64_t>>(nc, std::vector<std::int64_t>(states, 0)));
        for (std::size_t c = 0; c < nc; ++c) {
            const auto k = g.cliques[c].size();
            if (k > n) continue;
            if (auto t = sys.clique_action(s, c)) ways[k][c][*t] = 1;
        }
        for (std::size_t len = 1; len <= n; ++len) {
            for (std::size_t c = 0; c < nc; ++c) {
                for (std::size_t t = 0; t < states; ++t) {
                    const auto w = ways[len][c][t];
                    if (w == 0) continue;
                    add(out[s][t][len], w);
                    for (std::size_t d = 0; d < nc; ++d) {
                        if (!g.follows[c][d]) continue;
                        const auto next_len = len + g.cliques[d].size();
                        if (next_len > n) continue;
                        if (auto u = sys.clique_action(t, d)) add(ways[next_len][d][*u], w);
                    }
                }
            }
        }
    }
    return out;
}

GrowthTable truncated_product(const GrowthTable& g, const PolyMatrix& m, std::size_t n) {
    const auto states = g.size();
    GrowthTable out(states, std::vector<std::vector<std::int64_t>>(states, std::vector<std::int64_t>(n + 1, 0)));
    for (std::size_t s = 0; s < states; ++s)
        for (std::size_t u = 0; u < states; ++u)
            for (std::size_t k = 0; k <= n; ++k) {
                std::int64_t acc = 0;
                for (std::size_t t = 0; t < states; ++t)
                    for (std::size_t j = 0; j <= k; ++j) acc += g[s][t][j] * m[t][u][k - j];
                out[s][u][k] = acc;
            }
    return out;
}

IntPolynomial theta_polynomial(const AsyncSystem& sys) {
    return bareiss_determinant(mobius_matrix(sys));
}

CertifiedRoot characteristic_root(const AsyncSystem& sys, double tol) {
    if (!is_irreducible(sys)) throw NotIrreducible("the action is not irreducible");
    const auto theta = theta_polynomial(sys);
    try {
        return smallest_root(theta, 0.0, 1.0, std::min(tol, 1e-15));
    } catch (const NumericFailure& e) {
        throw NumericFailure("characteristic root: theta(z) = " + theta.to_string() + ": " + e.what());
    }
}

std::vector<std::vector<double>> evaluate(const PolyMatrix& m, double z) {
    std::vector<std::vector<double>> out(m.size());
    for (std::size_t i = 0; i < m.size(); ++i)
        for (const auto& p : m[i]) out[i].push_back(p(z));
    return out;
}

Cocycle cocycle(const AsyncSystem& sys, const CertifiedRoot& q0, double tol) {
    const auto n = sys.state_count();
    const auto mm = mobius_matrix(sys);
    const auto values = evaluate(mm, q0.midpoint);
    Eigen::MatrixXd a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = values[i][j];

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const auto& v = svd.matrixV();

    Cocycle out;
    out.q0 = q0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) out.singular_values.push_back(sv(i));

    const double threshold = tol * std::max(1.0, sv.size() > 0 ? sv(0) : 0.0);
    std::size_t kernel_dim = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) <= threshold) ++kernel_dim;
    if (kernel_dim >= 2) {
        std::vector<std::vector<double>> basis;
        for (std::size_t k = 0; k < kernel_dim; ++k) {
            std::vector<double> col;
            for (std::size_t i = 0; i < n; ++i) col.push_back(v(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(n - 1 - k)));
            basis.push_back(std::move(col));
        }
        throw KernelDegenerate("kernel of M(q0) has dimension " + std::to_string(kernel_dim) +
                                   "; the cocycle is not determined",
                               std::move(basis));
    }

    const auto last = static_cast<Eigen::Index>(n - 1);
    const double pivot = v(0, last);
    if (pivot == 0.0) throw NumericFailure("kernel vector of M(q0) vanishes at the initial state");
    for (std::size_t i = 0; i < n; ++i) out.h.push_back(v(static_cast<Eigen::Index>(i), last) / pivot);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(out.h[i] > 0.0)) {
            std::ostringstream os;
            os << "kernel vector of M(q0) is not positive: h(" << sys.state_label(i) << ") = " << out.h[i];
            throw NumericFailure(os.str());
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        double r = 0.0;
        for (std::size_t j = 0; j < n; ++j) r += values[i][j] * out.h[j];
        out.residual = std::max(out.residual, std::abs(r));
    }
    if (out.residual > tol) {
        std::ostringstream os;
        os << "cocycle residual " << out.residual << " exceeds tolerance " << tol;
        throw NumericFailure(os.str());
    }
    out.gamma.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t s = 0; s < n; ++s)
        for (std::size_t t = 0; t < n; ++t) out.gamma[s][t] = out.h[t] / out.h[s];

    const auto theta = bareiss_determinant(mm);
    IntPolynomial::Coefficient at_one = 0;
    for (auto c : theta.coefficients()) at_one += c;
    out.degenerate = at_one == 0 && q0.upper >= 1.0;
    return out;
}

} // namespace tracenet
