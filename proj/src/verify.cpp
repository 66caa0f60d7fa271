#include "tracenet/verify.hpp"

#include "tracenet/chain_sampler.hpp"
#include "tracenet/random_net.hpp"
#include "tracenet/uniform_measure.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

namespace tracenet {

std::string to_string(CheckStatus s) {
    switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Skip: return "skip";
    }
    return "?";
}

bool VerifyReport::pass() const {
    return std::none_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.status == CheckStatus::Fail; });
}

std::size_t VerifyReport::count(CheckStatus s) const {
    return static_cast<std::size_t>(
        std::count_if(checks.begin(), checks.end(), [s](const CheckResult& c) { return c.status == s; }));
}

namespace {

class Recorder {
public:
    Recorder(VerifyReport& report, std::string prefix) : report_(report), prefix_(std::move(prefix)) {}

    void add(const std::string& name, bool ok, double residual, std::string detail = {}) {
        report_.checks.push_back({prefix_ + name, ok ? CheckStatus::Pass : CheckStatus::Fail, residual, std::move(detail)});
    }
    void skip(const std::string& name, std::string why) {
        report_.checks.push_back({prefix_ + name, CheckStatus::Skip, 0.0, std::move(why)});
    }

private:
    VerifyReport& report_;
    std::string prefix_;
};

// Largest k <= cap whose trace count through length k stays in budget.
std::size_t enumeration_length(const TraceMonoid& m, std::size_t cap, std::size_t budget) {
    const auto lambda = growth_coefficients(m, cap);
    std::uint64_t total = 0;
    std::size_t k = 0;
    for (; k <= cap; ++k) {
        total += static_cast<std::uint64_t>(lambda[k]);
        if (total > budget) break;
    }
    return k == 0 ? 0 : k - 1;
}

void structural_checks(const AsyncSystem& sys, const VerifyOptions& opt, Recorder& rec) {
    const auto& m = sys.monoid();
    const auto n = sys.state_count();

    {
        std::size_t bad = 0;
        for (std::size_t s = 0; s < n; ++s)
            for (auto [a, b] : m.independent_pairs()) {
                const Letter ab[] = {a, b};
                const Letter ba[] = {b, a};
                if (act(sys, s, ab) != act(sys, s, ba)) ++bad;
            }
        rec.add("action_commutes", bad == 0, static_cast<double>(bad),
                std::to_string(bad) + " non-commuting (state, pair) cases");
    }

    const auto len = enumeration_length(m, opt.enumeration_length, opt.enumeration_budget);
    {
        const auto lambda = growth_coefficients(m, len);
        const auto counts = count_traces(m, len, std::max(len, kDefaultMaxEnumerationLength));
        std::size_t bad = 0;
        for (std::size_t k = 0; k <= len; ++k)
            if (counts[k] != static_cast<std::uint64_t>(lambda[k])) ++bad;
        rec.add("monoid_counts_vs_recurrence", bad == 0, static_cast<double>(bad),
                "lengths 0.." + std::to_string(len));
    }

    {
        // Brute force: act letter by letter along each enumerated trace.
        const auto dp = growth_matrix_coefficients(sys, len);
        GrowthTable brute(n, std::vector<std::vector<std::int64_t>>(n, std::vector<std::int64_t>(len + 1, 0)));
        const auto traces = enumerate_traces(m, len, std::max(len, kDefaultMaxEnumerationLength));
        for (const auto& x : traces) {
            const auto word = linearize(x);
            for (std::size_t s = 0; s < n; ++s)
                if (auto t = act(sys, s, word)) ++brute[s][*t][word.size()];
        }
        rec.add("growth_dp_vs_enumeration", dp == brute, dp == brute ? 0.0 : 1.0,
                "lengths 0.." + std::to_string(len) + ", " + std::to_string(traces.size()) + " traces");
    }

    {
        const auto mm = mobius_matrix(sys);
        const auto prod = truncated_product(growth_matrix_coefficients(sys, opt.order), mm, opt.order);
        std::int64_t worst = 0;
        for (std::size_t s = 0; s < n; ++s)
            for (std::size_t u = 0; u < n; ++u)
                for (std::size_t k = 0; k <= opt.order; ++k) {
                    const std::int64_t want = (s == u && k == 0) ? 1 : 0;
                    worst = std::max(worst, std::abs(prod[s][u][k] - want));
                }
        rec.add("inverse_identity", worst == 0, static_cast<double>(worst),
                "G(z) M(z) = I through order " + std::to_string(opt.order));

        if (n <= 6) {
            const auto b = bareiss_determinant(mm);
            const auto c = cofactor_determinant(mm);
            rec.add("theta_bareiss_vs_cofactor", b == c, b == c ? 0.0 : 1.0, "theta(z) = " + b.to_string());
        } else {
            rec.skip("theta_bareiss_vs_cofactor", "more than 6 states");
        }
    }
}

// Prefixes c1..ck from s with positive oracle mass; compares the marginal
// of the last clique with the chain row of (s.c1..c(k-1), c(k-1)).
void oracle_walk(const UniformMeasure& um, const CliqueChain& chain, std::size_t s, std::vector<Clique>& prefix,
                 std::vector<std::size_t>& indices, double mass, std::size_t depth, double& worst_marginal,
                 double& worst_row, std::size_t& compared) {
    const auto& sys = um.system();
    const auto& g = sys.clique_graph();
    if (prefix.size() >= depth) return;
    double total = 0.0;
    for (std::size_t d = 0; d < g.cliques.size(); ++d) {
        if (!indices.empty() && !g.follows[indices.back()][d]) continue;
        prefix.push_back(g.cliques[d]);
        indices.push_back(d);
        double p = prefix_probability_oracle(um, s, prefix);
        if (std::abs(p) <= 1e-12) p = 0.0;
        total += p;
        if (indices.size() >= 2) {
            std::vector<Letter> word;
            for (std::size_t i = 0; i + 1 < indices.size(); ++i)
                for (auto a : g.cliques[indices[i]].letters) word.push_back(a);
            const auto at = act(sys, s, word);
            if (at && mass > 1e-12) {
                const auto from = chain.index_of({*at, indices[indices.size() - 2]});
                const auto to_state = sys.clique_action(*at, d);
                double row = 0.0;
                if (from && to_state)
                    if (auto to = chain.index_of({*to_state, d})) row = chain.transition(*from, *to);
                worst_row = std::max(worst_row, std::abs(row - p / mass));
                ++compared;
            }
        }
        if (p > 0.0) oracle_walk(um, chain, s, prefix, indices, p, depth, worst_marginal, worst_row, compared);
        prefix.pop_back();
        indices.pop_back();
    }
    worst_marginal = std::max(worst_marginal, std::abs(total - mass));
}

void measure_checks(const AsyncSystem& sys, const VerifyOptions& opt, Recorder& rec) {
    const auto n = sys.state_count();
    const auto& m = sys.monoid();
    if (!is_irreducible(sys)) {
        rec.skip("measure", "action is not irreducible");
        return;
    }

    const auto theta = theta_polynomial(sys);
    CertifiedRoot q0;
    try {
        q0 = characteristic_root(sys, opt.root_tolerance);
    } catch (const NumericFailure& e) {
        rec.add("characteristic_root", false, 0.0, e.what());
        return;
    }
    {
        // An exact root sits at lower == upper; it must be the only one in (0, q0].
        const bool first = q0.exact ? count_roots(theta, 0.0, q0.upper) == 1
                                    : count_roots(theta, 0.0, q0.lower) == 0;
        const bool inside = q0.exact ? theta(q0.midpoint) == 0.0 : count_roots(theta, q0.lower, q0.upper) >= 1;
        std::ostringstream os;
        os.precision(17);
        os << "q0 in (" << q0.lower << ", " << q0.upper << "]";
        rec.add("characteristic_root", first && inside && q0.width() <= opt.root_tolerance, q0.width(), os.str());
    }

    Cocycle cc;
    try {
        cc = cocycle(sys, q0, opt.probability_tolerance);
    } catch (const KernelDegenerate& e) {
        rec.skip("cocycle", e.what());
        return;
    } catch (const NumericFailure& e) {
        rec.add("cocycle", false, 0.0, e.what());
        return;
    }
    rec.add("cocycle_residual", cc.residual <= opt.probability_tolerance, cc.residual, "max |M(q0) h|");

    if (opt.inject_gamma_fault) {
        const std::size_t t = n > 1 ? 1 : 0;
        cc.gamma[0][t] *= 1.01;
    }

    {
        double worst = 0.0;
        for (std::size_t s = 0; s < n; ++s)
            for (std::size_t t = 0; t < n; ++t)
                for (std::size_t u = 0; u < n; ++u)
                    worst = std::max(worst, std::abs(cc.gamma[s][t] * cc.gamma[t][u] - cc.gamma[s][u]));
        rec.add("cocycle_multiplicative", worst <= opt.chain_rule_tolerance, worst,
                "Gamma(s,t) Gamma(t,u) = Gamma(s,u)");
    }

    const UniformMeasure um(sys, cc);

    {
        const auto traces = enumerate_traces(m, opt.chain_rule_length,
                                             std::max(opt.chain_rule_length, kDefaultMaxEnumerationLength));
        double worst = 0.0;
        std::size_t pairs = 0;
        for (std::size_t s = 0; s < n; ++s)
            for (const auto& x : traces) {
                const auto sx = act(sys, s, x);
                const double px = cylinder_probability(um, s, x.length(), sx);
                for (const auto& y : traces) {
                    const double lhs = cylinder_probability(um, s, concat(m, x, y));
                    const double rhs = sx ? px * cylinder_probability(um, *sx, y) : 0.0;
                    worst = std::max(worst, std::abs(lhs - rhs));
                    ++pairs;
                }
            }
        rec.add("chain_rule", worst <= opt.chain_rule_tolerance, worst,
                std::to_string(pairs) + " (state, x, y) cases, |x|, |y| <= " + std::to_string(opt.chain_rule_length));
    }

    std::vector<FirstCliqueLaw> laws;
    try {
        for (std::size_t s = 0; s < n; ++s) laws.push_back(first_clique_law(um, s, 1e-12, opt.probability_tolerance));
        rec.add("first_clique_law", true, 0.0, "non-negative and normalised at every state");
    } catch (const NumericFailure& e) {
        rec.add("first_clique_law", false, 0.0, e.what());
        return;
    }

    std::vector<CliqueChain> chains;
    try {
        for (std::size_t s = 0; s < n; ++s) chains.push_back(build_chain(um, s, 1e-12, true));
    } catch (const NumericFailure& e) {
        rec.add("chain", false, 0.0, e.what());
        return;
    }

    {
        double worst = 0.0;
        std::size_t bad_support = 0;
        const auto& g = sys.clique_graph();
        for (const auto& chain : chains)
            for (std::size_t i = 0; i < chain.pairs.size(); ++i) {
                double sum = 0.0;
                for (const auto& e : chain.rows[i]) {
                    sum += e.probability;
                    const auto& from = chain.pairs[i];
                    const auto& to = chain.pairs[e.to];
                    if (!g.follows[from.clique][to.clique] || sys.clique_action(from.state, to.clique) != to.state ||
                        laws[from.state].weights[to.clique] <= 0.0)
                        ++bad_support;
                }
                worst = std::max(worst, std::abs(sum - 1.0));
            }
        rec.add("chain_row_stochastic", worst <= opt.probability_tolerance, worst);
        rec.add("chain_support", bad_support == 0, static_cast<double>(bad_support),
                "entries need c -> d, a matching state and kappa > 0");
    }

    {
        // Rows depend only on the pair, whatever the start state.
        double worst = 0.0;
        for (std::size_t s = 1; s < chains.size(); ++s)
            for (std::size_t i = 0; i < chains[s].pairs.size(); ++i) {
                auto j = chains[0].index_of(chains[s].pairs[i]);
                if (!j) continue;
                for (const auto& e : chains[s].rows[i]) {
                    auto to = chains[0].index_of(chains[s].pairs[e.to]);
                    const double other = to ? chains[0].transition(*j, *to) : 0.0;
                    worst = std::max(worst, std::abs(e.probability - other));
                }
            }
        rec.add("chain_start_independent", worst <= opt.chain_rule_tolerance, worst);
    }

    {
        double worst = 0.0;
        for (std::size_t s = 0; s < n; ++s)
            for (std::size_t c = 0; c < sys.cliques().size(); ++c) {
                const Clique one[] = {sys.cliques()[c]};
                worst = std::max(worst, std::abs(prefix_probability_oracle(um, s, one) - laws[s].weights[c]));
            }
        rec.add("oracle_vs_kappa", worst <= opt.probability_tolerance, worst, "depth 1, every state and clique");
    }

    if (opt.depth >= 2) {
        double worst_marginal = 0.0, worst_row = 0.0;
        std::size_t compared = 0;
        try {
            for (std::size_t s = 0; s < n; ++s) {
                std::vector<Clique> prefix;
                std::vector<std::size_t> indices;
                oracle_walk(um, chains[s], s, prefix, indices, 1.0, opt.depth, worst_marginal, worst_row, compared);
            }
            rec.add("oracle_marginals", worst_marginal <= opt.probability_tolerance, worst_marginal,
                    "sum over the next clique equals the shorter prefix, depth " + std::to_string(opt.depth));
            rec.add("oracle_vs_chain", worst_row <= opt.probability_tolerance, worst_row,
                    std::to_string(compared) + " conditionals, depth " + std::to_string(opt.depth));
        } catch (const CapExceeded& e) {
            rec.skip("oracle_vs_chain", e.what());
        }
    }
}

} // namespace

void verify_system(const AsyncSystem& sys, const VerifyOptions& options, VerifyReport& report,
                   const std::string& prefix) {
    Recorder rec(report, prefix);
    structural_checks(sys, options, rec);
    measure_checks(sys, options, rec);
}

void verify_random_nets(std::size_t count, std::uint64_t seed, const VerifyOptions& options, VerifyReport& report) {
    for (std::size_t i = 0; i < count; ++i) {
        const auto net = random_safe_net(seed + i);
        const auto graph = reachability_graph(net);
        const auto sys = build_system(net, graph);
        verify_system(sys, options, report, "random[" + std::to_string(seed + i) + "]/");
    }
}

} // namespace tracenet
