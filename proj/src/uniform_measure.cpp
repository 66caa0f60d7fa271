#include "tracenet/uniform_measure.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace tracenet {

UniformMeasure::UniformMeasure(const AsyncSystem& system, Cocycle cocycle)
    : system_(&system), cocycle_(std::move(cocycle)) {
    const auto n = system.state_count();
    if (cocycle_.gamma.size() != n) throw std::invalid_argument("cocycle does not match the system");
    for (const auto& row : cocycle_.gamma)
        if (row.size() != n) throw std::invalid_argument("cocycle does not match the system");
}

UniformMeasure uniform_measure(const AsyncSystem& sys, double root_tol, double tol) {
    auto q0 = characteristic_root(sys, root_tol);
    return UniformMeasure(sys, cocycle(sys, q0, tol));
}

double cylinder_probability(const UniformMeasure& um, std::size_t s, std::size_t length, StateOrSink end) {
    if (!end) return 0.0;
    return std::pow(um.q0(), static_cast<double>(length)) * um.gamma(s, *end);
}

double cylinder_probability(const UniformMeasure& um, std::size_t s, const Trace& x) {
    return cylinder_probability(um, s, x.length(), act(um.system(), s, x));
}

std::vector<double> clique_weights(const UniformMeasure& um, std::size_t s) {
    const auto& sys = um.system();
    const auto& cs = sys.cliques();
    std::vector<double> w(cs.size(), 0.0);
    for (std::size_t c = 0; c < cs.size(); ++c) {
        for (std::size_t d = 0; d < cs.size(); ++d) {
            if (cs[d].size() < cs[c].size()) continue;
            const auto end = sys.clique_action(s, d);
            if (!end) continue;
            if (!std::includes(cs[d].letters.begin(), cs[d].letters.end(), cs[c].letters.begin(), cs[c].letters.end()))
                continue;
            const double sign = ((cs[d].size() - cs[c].size()) % 2 == 0) ? 1.0 : -1.0;
            w[c] += sign * cylinder_probability(um, s, cs[d].size(), end);
        }
    }
    return w;
}

FirstCliqueLaw first_clique_law(const UniformMeasure& um, std::size_t s, double zero_slack, double sum_tol) {
    FirstCliqueLaw law{s, clique_weights(um, s)};
    const auto& sys = um.system();
    double total = 0.0;
    for (std::size_t c = 0; c < law.weights.size(); ++c) {
        double& w = law.weights[c];
        if (std::abs(w) <= zero_slack) w = 0.0;
        if (w < 0.0) {
            std::ostringstream os;
            os << "negative first-clique weight kappa_" << sys.state_label(s) << "("
               << clique_label(sys.monoid(), sys.cliques()[c]) << ") = " << w;
            throw NumericFailure(os.str());
        }
        total += w;
    }
    if (std::abs(total - 1.0) > sum_tol) {
        std::ostringstream os;
        os << "first-clique law at " << sys.state_label(s) << " sums to " << total;
        throw NumericFailure(os.str());
    }
    return law;
}

double prefix_probability_oracle(const UniformMeasure& um, std::size_t s, std::span<const Clique> prefix,
                                 const OracleLimits& limits) {
    const auto& sys = um.system();
    const auto& m = sys.monoid();
    if (prefix.size() > limits.max_depth)
        throw CapExceeded("oracle depth " + std::to_string(prefix.size()) + " exceeds cap " +
                          std::to_string(limits.max_depth));
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        if (!is_clique(m, prefix[i].letters) || !std::is_sorted(prefix[i].letters.begin(), prefix[i].letters.end()))
            throw std::invalid_argument("oracle prefix contains a non-clique");
        if (i > 0 && !is_normal_pair(m, prefix[i - 1], prefix[i]))
            throw std::invalid_argument("oracle prefix is not a normal sequence");
    }

    const Trace x{std::vector<Clique>(prefix.begin(), prefix.end())};

    // up(x) minus the cylinders where some letter a independent of clique i
    // would have joined it.
    std::vector<Trace> violations;
    std::vector<Letter> head;
    for (const auto& gamma : prefix) {
        for (Letter a = 0; a < m.size(); ++a) {
            if (gamma.contains(a)) continue;
            bool free = std::all_of(gamma.letters.begin(), gamma.letters.end(), [&](Letter b) { return m.independent(a, b); });
            if (!free) continue;
            auto word = head;
            word.insert(word.end(), gamma.letters.begin(), gamma.letters.end());
            word.push_back(a);
            auto v = trace_lub(m, x, normalize(m, word));
            if (!v) continue;
            if (std::find(violations.begin(), violations.end(), *v) == violations.end()) violations.push_back(std::move(*v));
        }
        head.insert(head.end(), gamma.letters.begin(), gamma.letters.end());
    }
    if (violations.size() > limits.max_generators)
        throw CapExceeded("oracle has " + std::to_string(violations.size()) + " violation cylinders, cap " +
                          std::to_string(limits.max_generators));

    std::size_t terms = 0;
    double total = 0.0;
    // Subsets without a common upper bound contribute 0, and so do all of
    // their supersets, so the recursion prunes there.
    auto expand = [&](auto&& self, std::size_t from, const Trace& bound, double sign) -> void {
        if (++terms > limits.max_terms) throw CapExceeded("oracle inclusion-exclusion term cap exceeded");
        total += sign * cylinder_probability(um, s, bound);
        for (std::size_t j = from; j < violations.size(); ++j) {
            auto next = trace_lub(m, bound, violations[j]);
            if (next) self(self, j + 1, *next, -sign);
        }
    };
    expand(expand, 0, x, 1.0);
    return total;
}

} // namespace tracenet
