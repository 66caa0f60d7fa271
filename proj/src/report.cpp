#include "tracenet/report.hpp"

#include "tracenet/reference.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tracenet {

Json trace_json(const TraceMonoid& m, const Trace& x) {
    Json out = Json::array();
    for (const auto& c : x.cliques) out.push_back(clique_names(m, c));
    return out;
}

Json polynomial_json(const IntPolynomial& p) {
    Json out = Json::array();
    for (auto c : p.coefficients()) out.push_back(c);
    if (out.empty()) out.push_back(0);
    return out;
}

Json root_json(const CertifiedRoot& r) {
    return Json{{"lower", r.lower}, {"upper", r.upper}, {"midpoint", r.midpoint}, {"exact", r.exact}};
}

Json system_json(const PetriNet& net, const ReachabilityGraph& graph, const AsyncSystem& sys) {
    const auto& m = sys.monoid();
    Json out;
    out["net"] = {{"hash", content_hash(net)},
                  {"places", net.places().size()},
                  {"transitions", net.transitions().size()},
                  {"bundled_example", reference::is_fig2(net)}};
    Json warnings = Json::array();
    for (auto t : graph.dead_transitions)
        warnings.push_back("transition '" + net.transitions()[t].id + "' is never enabled");
    out["warnings"] = warnings;
    out["alphabet"] = m.names();
    Json pairs = Json::array();
    for (auto [a, b] : m.independent_pairs()) pairs.push_back({m.name(a), m.name(b)});
    out["independence"] = pairs;
    out["state_count"] = sys.state_count();
    Json states = Json::array();
    for (std::size_t s = 0; s < sys.state_count(); ++s)
        states.push_back({{"label", sys.state_label(s)}, {"marking", net.place_names(graph.markings[s])}});
    out["states"] = states;
    Json table = Json::object();
    for (std::size_t s = 0; s < sys.state_count(); ++s) {
        Json row = Json::object();
        for (Letter a = 0; a < m.size(); ++a) {
            auto t = sys.letter_action(s, a);
            row[m.name(a)] = t ? Json(sys.state_label(*t)) : Json(nullptr);
        }
        table[sys.state_label(s)] = row;
    }
    out["action_table"] = table;
    return out;
}

Json analysis_json(const PetriNet& net, const ReachabilityGraph& graph, const AsyncSystem& sys,
                   const UniformMeasure* measure) {
    Json out = system_json(net, graph, sys);
    out["irreducible"] = is_irreducible(sys);
    const auto mu = mobius_polynomial(sys.monoid());
    out["mobius_polynomial"] = {{"coefficients", polynomial_json(mu)}, {"text", mu.to_string()}};
    const auto mm = mobius_matrix(sys);
    Json mj = Json::array();
    for (const auto& row : mm) {
        Json r = Json::array();
        for (const auto& p : row) r.push_back(polynomial_json(p));
        mj.push_back(r);
    }
    out["mobius_matrix"] = mj;
    const auto theta = bareiss_determinant(mm);
    out["theta"] = {{"coefficients", polynomial_json(theta)}, {"text", theta.to_string()}};
    if (measure) {
        const auto& cc = measure->cocycle();
        out["q0"] = root_json(cc.q0);
        out["degenerate_q0"] = cc.degenerate;
        Json h = Json::object();
        for (std::size_t s = 0; s < sys.state_count(); ++s) h[sys.state_label(s)] = cc.h[s];
        out["h"] = h;
        Json gamma = Json::object();
        for (std::size_t s = 0; s < sys.state_count(); ++s) {
            Json row = Json::object();
            for (std::size_t t = 0; t < sys.state_count(); ++t) row[sys.state_label(t)] = cc.gamma[s][t];
            gamma[sys.state_label(s)] = row;
        }
        out["gamma"] = gamma;
        out["singular_values"] = cc.singular_values;
        out["cocycle_residual"] = cc.residual;
    }
    return out;
}

Json kappa_json(const UniformMeasure& um) {
    const auto& sys = um.system();
    Json out = Json::object();
    for (std::size_t s = 0; s < sys.state_count(); ++s) {
        const auto law = first_clique_law(um, s);
        Json row = Json::object();
        for (std::size_t c = 0; c < law.weights.size(); ++c)
            row[clique_label(sys.monoid(), sys.cliques()[c])] = law.weights[c];
        out[sys.state_label(s)] = row;
    }
    return out;
}

Json lumping_json(const CliqueChain& chain, const TraceMonoid& m, const LumpingResult& lumping) {
    Json out;
    out["verdict"] = lumping.lumpable ? "LUMPABLE" : "NOT_LUMPABLE";
    Json agg = Json::object();
    for (std::size_t s = 0; s < lumping.aggregated.size(); ++s) {
        const auto& label = chain.state_labels.at(s);
        if (!lumping.aggregated[s]) {
            agg[label] = nullptr;
            continue;
        }
        Json row = Json::object();
        for (std::size_t t = 0; t < lumping.aggregated[s]->size(); ++t) row[chain.state_labels[t]] = (*lumping.aggregated[s])[t];
        agg[label] = row;
    }
    out["aggregated"] = agg;
    Json conflicts = Json::array();
    for (auto [i, j] : lumping.conflicts) conflicts.push_back({chain.label(m, i), chain.label(m, j)});
    out["conflicts"] = conflicts;
    return out;
}

Json chain_json(const CliqueChain& chain, const UniformMeasure& um, const LumpingResult& lumping) {
    const auto& m = um.system().monoid();
    Json out;
    Json labels = Json::array();
    for (std::size_t i = 0; i < chain.pairs.size(); ++i) labels.push_back(chain.label(m, i));
    out["start_state"] = chain.state_labels.at(chain.start_state);
    out["pairs"] = labels;
    Json init = Json::object();
    for (std::size_t i = 0; i < chain.pairs.size(); ++i) init[chain.label(m, i)] = chain.initial[i];
    out["initial_law"] = init;
    out["kappa"] = kappa_json(um);
    Json matrix = Json::array();
    for (std::size_t i = 0; i < chain.pairs.size(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < chain.pairs.size(); ++j) row.push_back(chain.transition(i, j));
        matrix.push_back(row);
    }
    out["transitions"] = matrix;
    out["lumping"] = lumping_json(chain, m, lumping);
    return out;
}

std::string chain_csv(const CliqueChain& chain, const TraceMonoid& m) {
    auto quoted = [](const std::string& s) { return "\"" + s + "\""; };
    std::ostringstream os;
    os.precision(17);
    os << "pair";
    for (std::size_t j = 0; j < chain.pairs.size(); ++j) os << "," << quoted(chain.label(m, j));
    os << "\n";
    for (std::size_t i = 0; i < chain.pairs.size(); ++i) {
        os << quoted(chain.label(m, i));
        for (std::size_t j = 0; j < chain.pairs.size(); ++j) os << "," << chain.transition(i, j);
        os << "\n";
    }
    return os.str();
}

Json discrepancy_json(const CliqueChain& chain, const UniformMeasure& um, double tol) {
    const auto& sys = um.system();
    const auto& m = sys.monoid();
    const auto printed_labels = reference::printed_pair_labels();
    const auto printed = reference::printed_transition_matrix();

    std::vector<std::string> computed_labels;
    for (std::size_t i = 0; i < chain.pairs.size(); ++i) computed_labels.push_back(chain.label(m, i));

    Json out;
    out["pairs_match"] = computed_labels == printed_labels;
    Json rows = Json::array();
    std::size_t matching = 0;
    for (std::size_t i = 0; i < printed_labels.size(); ++i) {
        auto ci = std::find(computed_labels.begin(), computed_labels.end(), printed_labels[i]);
        Json row;
        row["pair"] = printed_labels[i];
        if (ci == computed_labels.end()) {
            row["matches"] = false;
            row["note"] = "pair not reachable in the computed chain";
            rows.push_back(row);
            continue;
        }
        const auto from = static_cast<std::size_t>(ci - computed_labels.begin());
        double diff = 0.0;
        Json printed_row = Json::object(), computed_row = Json::object();
        for (std::size_t j = 0; j < printed_labels.size(); ++j) {
            auto cj = std::find(computed_labels.begin(), computed_labels.end(), printed_labels[j]);
            const double value = cj == computed_labels.end()
                                     ? 0.0
                                     : chain.transition(from, static_cast<std::size_t>(cj - computed_labels.begin()));
            diff = std::max(diff, std::abs(value - printed[i][j]));
            if (printed[i][j] != 0.0) printed_row[printed_labels[j]] = printed[i][j];
            if (value != 0.0) computed_row[printed_labels[j]] = value;
        }
        row["matches"] = diff <= tol;
        row["max_abs_diff"] = diff;
        if (diff <= tol) {
            ++matching;
        } else {
            row["printed"] = printed_row;
            row["computed"] = computed_row;
            // Conditional next-clique law straight from the measure, from a
            // start state that reaches this pair in one step.
            const auto& p = chain.pairs[from];
            Json oracle = Json::object();
            for (std::size_t s = 0; s < sys.state_count(); ++s) {
                if (sys.clique_action(s, p.clique) != p.state) continue;
                const Clique first[] = {sys.cliques()[p.clique]};
                const double base = prefix_probability_oracle(um, s, first);
                if (base <= 1e-12) continue;
                oracle["start_state"] = sys.state_label(s);
                Json cond = Json::object();
                for (std::size_t d = 0; d < sys.cliques().size(); ++d) {
                    if (!sys.clique_graph().follows[p.clique][d]) continue;
                    const Clique two[] = {sys.cliques()[p.clique], sys.cliques()[d]};
                    const double v = prefix_probability_oracle(um, s, two) / base;
                    if (std::abs(v) > 1e-12) cond[clique_label(m, sys.cliques()[d])] = v;
                }
                oracle["conditional_next_clique"] = cond;
                break;
            }
            row["oracle"] = oracle;
        }
        rows.push_back(row);
    }
    out["rows"] = rows;
    out["rows_matching"] = matching;
    out["rows_total"] = printed_labels.size();

    Json kappa = Json::object();
    const auto law = first_clique_law(um, 0);
    for (const auto& [label, value] : reference::printed_kappa()) {
        auto idx = sys.clique_graph().index_of(normalize(m, parse_word(m, label)).cliques.at(0));
        const double computed = idx ? law.weights[*idx] : 0.0;
        kappa[label] = {{"printed", value}, {"computed", computed}, {"matches", std::abs(value - computed) <= tol}};
    }
    out["kappa"] = kappa;

    const auto printed_chain = reference::printed_chain(sys);
    const auto printed_lumping = lumping_check(printed_chain, sys.state_count(), tol);
    const auto computed_lumping = lumping_check(chain, sys.state_count(), tol);
    Json lump;
    lump["printed_claim"] = reference::printed_lumped_matrix();
    lump["printed_matrix"] = lumping_json(printed_chain, m, printed_lumping);
    lump["computed_matrix"] = lumping_json(chain, m, computed_lumping);
    const auto claimed = reference::printed_lumped_matrix();
    Json groups = Json::object();
    for (std::size_t s = 0; s < sys.state_count() && s < claimed.size(); ++s) {
        const auto& agg = computed_lumping.aggregated[s];
        bool agrees = false;
        if (agg) {
            agrees = true;
            for (std::size_t t = 0; t < claimed[s].size(); ++t)
                if (std::abs((*agg)[t] - claimed[s][t]) > tol) agrees = false;
        }
        groups[sys.state_label(s)] = agrees ? "agrees with the printed lumped row"
                                            : "rows disagree; printed lumped row not reproduced";
    }
    lump["groups"] = groups;
    out["lumping"] = lump;
    return out;
}

Json validation_json(const ValidationReport& report) {
    auto cells = [](const std::vector<ValidationCell>& cs) {
        Json out = Json::array();
        for (const auto& c : cs)
            out.push_back({{"cell", c.label},
                           {"expected", c.expected},
                           {"count", c.count},
                           {"frequency", c.frequency},
                           {"z", std::isfinite(c.z) ? Json(c.z) : Json("inf")},
                           {"pass", c.pass}});
        return out;
    };
    Json out;
    out["runs"] = report.runs;
    out["steps"] = report.steps;
    out["threshold_sigma"] = report.threshold;
    out["pass"] = report.pass;
    out["note"] = report.note;
    out["first_clique"] = cells(report.first_clique);
    out["two_clique_prefix"] = cells(report.two_clique_prefix);
    return out;
}

std::string execution_jsonl(const ExecutionSample& sample, const CliqueChain& chain, const PetriNet& net,
                            const AsyncSystem& sys) {
    std::string out;
    for (std::size_t k = 0; k < sample.steps.size(); ++k) {
        const auto& step = sample.steps[k];
        Json rec;
        rec["run"] = sample.run;
        rec["k"] = k + 1;
        rec["clique"] = clique_names(sys.monoid(), chain.cliques[step.clique]);
        rec["marking"] = net.place_names(sys.markings().at(step.state));
        out += rec.dump();
        out += '\n';
    }
    return out;
}

} // namespace tracenet
