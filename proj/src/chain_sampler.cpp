#include "tracenet/chain_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace tracenet {

std::optional<std::size_t> CliqueChain::index_of(ChainPair p) const {
    auto it = std::lower_bound(pairs.begin(), pairs.end(), p);
    if (it == pairs.end() || *it != p) return std::nullopt;
    return static_cast<std::size_t>(it - pairs.begin());
}

double CliqueChain::transition(std::size_t from, std::size_t to) const {
    const auto& row = rows.at(from);
    auto it = std::lower_bound(row.begin(), row.end(), to, [](const ChainEntry& e, std::size_t t) { return e.to < t; });
    return (it != row.end() && it->to == to) ? it->probability : 0.0;
}

std::string CliqueChain::label(const TraceMonoid& m, std::size_t pair) const {
    const auto& p = pairs.at(pair);
    return state_labels.at(p.state) + "," + clique_label(m, cliques.at(p.clique));
}

std::map<ChainPair, double> initial_law(const UniformMeasure& um, std::size_t s0, double zero_slack) {
    const auto law = first_clique_law(um, s0, zero_slack);
    std::map<ChainPair, double> out;
    for (std::size_t c = 0; c < law.weights.size(); ++c) {
        if (law.weights[c] <= 0.0) continue;
        out[{*um.system().clique_action(s0, c), c}] = law.weights[c];
    }
    return out;
}

CliqueChain build_chain(const UniformMeasure& um, std::size_t s0, double zero_slack, bool allow_degenerate) {
    const auto& sys = um.system();
    if (um.cocycle().degenerate && !allow_degenerate)
        throw NumericFailure("degenerate characteristic root q0 = 1: cylinder probabilities do not decay");
    const auto& g = sys.clique_graph();

    std::vector<std::optional<FirstCliqueLaw>> laws(sys.state_count());
    auto law_at = [&](std::size_t s) -> const FirstCliqueLaw& {
        if (!laws[s]) laws[s] = first_clique_law(um, s, zero_slack);
        return *laws[s];
    };

    std::map<ChainPair, std::size_t> found;
    std::vector<ChainPair> order;
    std::deque<ChainPair> queue;
    auto discover = [&](ChainPair p) {
        if (found.emplace(p, order.size()).second) {
            order.push_back(p);
            queue.push_back(p);
        }
    };

    const auto initial = initial_law(um, s0, zero_slack);
    for (const auto& [p, w] : initial) discover(p);

    std::map<ChainPair, std::vector<std::pair<ChainPair, double>>> raw_rows;
    while (!queue.empty()) {
        const ChainPair p = queue.front();
        queue.pop_front();
        const auto& law = law_at(p.state);
        double mass = 0.0;
        for (std::size_t d = 0; d < g.cliques.size(); ++d)
            if (g.follows[p.clique][d]) mass += law.weights[d];
        if (!(mass > 0.0)) {
            throw NumericFailure("no continuation mass at reachable pair (" + sys.state_label(p.state) + "," +
                                 clique_label(sys.monoid(), g.cliques[p.clique]) + ")");
        }
        auto& row = raw_rows[p];
        for (std::size_t d = 0; d < g.cliques.size(); ++d) {
            if (!g.follows[p.clique][d] || law.weights[d] <= 0.0) continue;
            ChainPair next{*sys.clique_action(p.state, d), d};
            row.emplace_back(next, law.weights[d] / mass);
            discover(next);
        }
    }

    CliqueChain chain;
    chain.start_state = s0;
    chain.cliques = g.cliques;
    for (std::size_t s = 0; s < sys.state_count(); ++s) chain.state_labels.push_back(sys.state_label(s));
    // std::map iteration gives (state, clique index) order, and clique
    // indices already follow the canonical clique order.
    for (const auto& [p, row] : raw_rows) chain.pairs.push_back(p);
    chain.initial.assign(chain.pairs.size(), 0.0);
    for (const auto& [p, w] : initial) chain.initial[*chain.index_of(p)] = w;
    chain.rows.resize(chain.pairs.size());
    for (std::size_t i = 0; i < chain.pairs.size(); ++i) {
        for (const auto& [next, w] : raw_rows[chain.pairs[i]]) chain.rows[i].push_back({*chain.index_of(next), w});
        std::sort(chain.rows[i].begin(), chain.rows[i].end(),
                  [](const ChainEntry& a, const ChainEntry& b) { return a.to < b.to; });
    }
    return chain;
}

LumpingResult lumping_check(const CliqueChain& chain, std::size_t state_count, double tol) {
    LumpingResult out;
    const auto n = chain.pairs.size();
    std::vector<std::vector<double>> mass(n, std::vector<double>(state_count, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (const auto& e : chain.rows[i]) mass[i][chain.pairs[e.to].state] += e.probability;

    out.aggregated.assign(state_count, std::nullopt);
    for (std::size_t s = 0; s < state_count; ++s) {
        std::vector<std::size_t> group;
        for (std::size_t i = 0; i < n; ++i)
            if (chain.pairs[i].state == s) group.push_back(i);
        bool consistent = true;
        for (std::size_t a = 0; a < group.size(); ++a) {
            for (std::size_t b = a + 1; b < group.size(); ++b) {
                bool same = true;
                for (std::size_t t = 0; t < state_count; ++t)
                    if (std::abs(mass[group[a]][t] - mass[group[b]][t]) > tol) same = false;
                if (!same) {
                    consistent = false;
                    out.conflicts.emplace_back(group[a], group[b]);
                }
            }
        }
        if (consistent && !group.empty()) out.aggregated[s] = mass[group.front()];
        if (!consistent) out.lumpable = false;
    }
    return out;
}

RunRng::RunRng(std::uint64_t seed, std::uint64_t run) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(run), static_cast<std::uint32_t>(run >> 32)};
    engine_.seed(seq);
}

double RunRng::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::vector<Letter> ExecutionSample::firing_sequence(const CliqueChain& chain) const {
    std::vector<Letter> out;
    for (const auto& s : steps) {
        const auto& ls = chain.cliques.at(s.clique).letters;
        out.insert(out.end(), ls.begin(), ls.end());
    }
    return out;
}

namespace {

template <class Weights>
std::size_t draw(RunRng& rng, std::size_t n, Weights&& weight) {
    const double u = rng.uniform();
    double cum = 0.0;
    std::size_t last_positive = n;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = weight(i);
        if (w <= 0.0) continue;
        last_positive = i;
        cum += w;
        if (u < cum) return i;
    }
    if (last_positive == n) throw std::logic_error("sampling from an empty distribution");
    return last_positive; // rounding left u above the final cumulative sum
}

} // namespace

ExecutionSample sample_execution(const CliqueChain& chain, std::size_t steps, std::uint64_t seed, std::uint64_t run) {
    if (steps == 0) throw std::invalid_argument("sample_execution: steps must be positive");
    RunRng rng(seed, run);
    ExecutionSample out{seed, run, {}};
    out.steps.reserve(steps);
    std::size_t cur = draw(rng, chain.pairs.size(), [&](std::size_t i) { return chain.initial[i]; });
    out.steps.push_back({chain.pairs[cur].clique, chain.pairs[cur].state});
    for (std::size_t k = 1; k < steps; ++k) {
        const auto& row = chain.rows[cur];
        cur = row[draw(rng, row.size(), [&](std::size_t i) { return row[i].probability; })].to;
        out.steps.push_back({chain.pairs[cur].clique, chain.pairs[cur].state});
    }
    return out;
}

std::vector<ExecutionSample> sample_executions(const CliqueChain& chain, std::size_t steps, std::size_t runs,
                                               std::uint64_t seed, unsigned threads) {
    std::vector<ExecutionSample> out(runs);
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(runs, 1))));
    if (threads == 1) {
        for (std::size_t r = 0; r < runs; ++r) out[r] = sample_execution(chain, steps, seed, r);
        return out;
    }
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t r = w; r < runs; r += threads) out[r] = sample_execution(chain, steps, seed, r);
        });
    }
    for (auto& t : pool) t.join();
    return out;
}

namespace {

ValidationCell make_cell(std::string label, double expected, std::uint64_t count, std::size_t runs, double threshold) {
    ValidationCell c;
    c.label = std::move(label);
    c.expected = expected;
    c.count = count;
    c.frequency = static_cast<double>(count) / static_cast<double>(runs);
    const double var = expected * (1.0 - expected) / static_cast<double>(runs);
    if (var > 0.0) {
        c.z = (c.frequency - expected) / std::sqrt(var);
    } else {
        c.z = (c.frequency == expected) ? 0.0 : std::numeric_limits<double>::infinity();
    }
    c.pass = std::abs(c.z) < threshold;
    return c;
}

} // namespace

ValidationReport empirical_validation(const CliqueChain& chain, const UniformMeasure& um, std::size_t runs,
                                      std::size_t steps, std::uint64_t seed, unsigned threads) {
    if (runs < kMinValidationRuns)
        throw std::invalid_argument("empirical_validation needs at least " + std::to_string(kMinValidationRuns) +
                                    " runs");
    const auto& sys = um.system();
    const auto& m = sys.monoid();
    const auto& g = sys.clique_graph();
    const auto nc = g.cliques.size();
    const auto s0 = chain.start_state;

    ValidationReport rep;
    rep.runs = runs;
    rep.steps = std::max<std::size_t>(steps, 2);

    const auto samples = sample_executions(chain, rep.steps, runs, seed, threads);
    std::vector<std::uint64_t> first(nc, 0);
    std::vector<std::vector<std::uint64_t>> second(nc, std::vector<std::uint64_t>(nc, 0));
    for (const auto& s : samples) {
        ++first[s.steps[0].clique];
        ++second[s.steps[0].clique][s.steps[1].clique];
    }

    const auto kappa = clique_weights(um, s0);
    for (std::size_t c = 0; c < nc; ++c) {
        const double p = std::abs(kappa[c]) <= 1e-12 ? 0.0 : kappa[c];
        rep.first_clique.push_back(make_cell("(" + clique_label(m, g.cliques[c]) + ")", p, first[c], runs, rep.threshold));
    }
    for (std::size_t c = 0; c < nc; ++c) {
        for (std::size_t d = 0; d < nc; ++d) {
            if (!g.follows[c][d]) continue;
            double p = 0.0;
            if (kappa[c] > 1e-12) {
                const Clique prefix[] = {g.cliques[c], g.cliques[d]};
                p = prefix_probability_oracle(um, s0, prefix);
                if (std::abs(p) <= 1e-12) p = 0.0;
            }
            if (p == 0.0 && second[c][d] == 0) continue;
            rep.two_clique_prefix.push_back(make_cell(
                "(" + clique_label(m, g.cliques[c]) + ")(" + clique_label(m, g.cliques[d]) + ")", p, second[c][d], runs,
                rep.threshold));
        }
    }

    std::size_t cells = 0;
    for (const auto* group : {&rep.first_clique, &rep.two_clique_prefix})
        for (const auto& c : *group) {
            ++cells;
            if (!c.pass) rep.pass = false;
        }
    std::ostringstream note;
    note << cells << " cells at |z| < " << rep.threshold
         << " each; two-sided per-cell level 6.3e-5, Bonferroni family-wise level <= "
         << std::min(1.0, 6.334e-5 * static_cast<double>(cells));
    rep.note = note.str();
    return rep;
}

} // namespace tracenet
