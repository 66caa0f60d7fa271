#include "tracenet/reference.hpp"

#include <cmath>
#include <stdexcept>

namespace tracenet::reference {

namespace {
const double r2 = std::sqrt(2.0);
} // namespace

std::string_view fig2_net_json() {
    return R"({"places":["p0","p1","p2","p3"],"transitions":[)"
           R"({"id":"a","pre":["p0"],"post":["p0"]},)"
           R"({"id":"b","pre":["p0"],"post":["p1"]},)"
           R"({"id":"c","pre":["p1","p2"],"post":["p0","p2"]},)"
           R"({"id":"d","pre":["p2","p3"],"post":["p2","p3"]},)"
           R"({"id":"e","pre":["p3"],"post":["p3"]}],)"
           R"("initial_marking":["p0","p2","p3"]})";
}

const std::string& fig2_hash() {
    static const std::string hash = content_hash(parse_net(fig2_net_json()));
    return hash;
}

bool is_fig2(const PetriNet& net) {
    return content_hash(net) == fig2_hash();
}

std::map<std::string, double> printed_kappa() {
    return {
        {"a", -7 + 5 * r2}, {"b", 10 - 7 * r2}, {"c", 0.0},         {"d", 0.0},          {"e", 0.0},
        {"ad", 3 - 2 * r2}, {"ae", 3 - 2 * r2}, {"bd", -4 + 3 * r2}, {"be", -4 + 3 * r2}, {"ce", 0.0},
    };
}

std::vector<std::string> printed_pair_labels() {
    return {"M0,a", "M0,c", "M0,ad", "M0,ae", "M0,ce", "M1,b", "M1,d", "M1,e", "M1,bd", "M1,be"};
}

std::vector<std::vector<double>> printed_transition_matrix() {
    const std::vector<double> from_a{-1 + r2, 0, 0, 0, 0, 2 - r2, 0, 0, 0, 0};
    const std::vector<double> from_c{-2 + 1.5 * r2, 0, 1 - 0.5 * r2, 0, 0, 3 - 2 * r2, 0, 0, -1 + r2, 0};
    const std::vector<double> kappa_row{-7 + 5 * r2, 0, 3 - 2 * r2, 3 - 2 * r2, 0, 10 - 7 * r2, 0, 0, -4 + 3 * r2, -4 + 3 * r2};
    const std::vector<double> at_m1{0, 3 - 2 * r2, 0, 0, -2 + 1.5 * r2, 0, -1 + r2, 1 - 0.5 * r2, 0, 0};
    const std::vector<double> from_e{0, 0, 0, 0, 0, 0, 2 - r2, -1 + r2, 0, 0};
    return {from_a, from_c, kappa_row, kappa_row, kappa_row, at_m1, at_m1, from_e, at_m1, at_m1};
}

std::vector<std::vector<double>> printed_lumped_matrix() {
    return {{-1 + r2, 2 - r2}, {1 - 0.5 * r2, 0.5 * r2}};
}

CliqueChain printed_chain(const AsyncSystem& sys) {
    CliqueChain chain;
    chain.start_state = 0;
    chain.cliques = sys.cliques();
    for (std::size_t s = 0; s < sys.state_count(); ++s) chain.state_labels.push_back(sys.state_label(s));

    const auto labels = printed_pair_labels();
    for (const auto& label : labels) {
        const auto comma = label.find(',');
        const auto state_label = label.substr(0, comma);
        const auto clique = label.substr(comma + 1);
        ChainPair p{};
        bool found_state = false;
        for (std::size_t s = 0; s < sys.state_count(); ++s)
            if (sys.state_label(s) == state_label) {
                p.state = s;
                found_state = true;
            }
        auto idx = sys.clique_graph().index_of(normalize(sys.monoid(), parse_word(sys.monoid(), clique)).cliques.at(0));
        if (!found_state || !idx) throw std::invalid_argument("printed chain does not match the system");
        p.clique = *idx;
        chain.pairs.push_back(p);
    }
    // printed order is (state, clique) in graded-lex order, i.e. sorted
    const auto matrix = printed_transition_matrix();
    const auto kappa = printed_kappa();
    chain.rows.resize(labels.size());
    chain.initial.assign(labels.size(), 0.0);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        for (std::size_t j = 0; j < labels.size(); ++j)
            if (matrix[i][j] != 0.0) chain.rows[i].push_back({j, matrix[i][j]});
        const auto clique = labels[i].substr(labels[i].find(',') + 1);
        chain.initial[i] = kappa.at(clique);
    }
    return chain;
}

} // namespace tracenet::reference
