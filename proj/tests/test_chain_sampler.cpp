#include "tracenet/chain_sampler.hpp"
#include "tracenet/reference.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace tracenet;
using oracle::kSqrt2;

namespace {

struct Fixture {
    PetriNet net = parse_net(reference::fig2_net_json());
    ReachabilityGraph graph = reachability_graph(net);
    AsyncSystem sys = build_system(net, graph);
    UniformMeasure um = uniform_measure(sys);
    CliqueChain chain = build_chain(um, 0);

    std::size_t pair(std::string_view label) const {
        for (std::size_t i = 0; i < chain.pairs.size(); ++i)
            if (chain.label(sys.monoid(), i) == label) return i;
        throw std::out_of_range(std::string(label));
    }
    double p(std::string_view from, std::string_view to) const { return chain.transition(pair(from), pair(to)); }
};

const Fixture& fig2() {
    static const Fixture f;
    return f;
}

} // namespace

TEST(Chain, ReachablePairs) {
    const auto& f = fig2();
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < f.chain.pairs.size(); ++i) labels.push_back(f.chain.label(f.sys.monoid(), i));
    EXPECT_EQ(labels, reference::printed_pair_labels());
}

TEST(Chain, InitialLaw) {
    const auto& f = fig2();
    const auto law = initial_law(f.um, 0);
    double total = 0;
    for (const auto& [p, w] : law) total += w;
    EXPECT_NEAR(total, 1.0, 1e-9);
    EXPECT_NEAR(f.chain.initial[f.pair("M1,b")], 10 - 7 * kSqrt2, 1e-9);
    EXPECT_EQ(f.chain.initial[f.pair("M0,ce")], 0.0);
}

TEST(Chain, PublishedRows) {
    const auto& f = fig2();
    const auto labels = reference::printed_pair_labels();
    const auto printed = reference::printed_transition_matrix();
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == "M1,b") continue;
        for (std::size_t j = 0; j < labels.size(); ++j)
            EXPECT_NEAR(f.p(labels[i], labels[j]), printed[i][j], 1e-9) << labels[i] << " -> " << labels[j];
    }
    EXPECT_NEAR(f.p("M1,e", "M1,d"), 2 - kSqrt2, 1e-9);
    EXPECT_NEAR(f.p("M1,e", "M1,e"), kSqrt2 - 1, 1e-9);
}

TEST(Chain, RowAfterBIsForcedToC) {
    const auto& f = fig2();
    EXPECT_NEAR(f.p("M1,b", "M0,c"), 1.0, 1e-12);
    // the same conditional straight from the measure
    const auto b = normalize(f.sys.monoid(), parse_word(f.sys.monoid(), "b")).cliques[0];
    const auto c = normalize(f.sys.monoid(), parse_word(f.sys.monoid(), "c")).cliques[0];
    const Clique one[] = {b};
    const Clique two[] = {b, c};
    EXPECT_NEAR(prefix_probability_oracle(f.um, 0, two) / prefix_probability_oracle(f.um, 0, one), 1.0, 1e-9);
}

TEST(Chain, Invariants) {
    const auto& f = fig2();
    const auto& g = f.sys.clique_graph();
    for (std::size_t i = 0; i < f.chain.pairs.size(); ++i) {
        double sum = 0;
        for (const auto& e : f.chain.rows[i]) {
            EXPECT_GT(e.probability, 0.0);
            sum += e.probability;
            const auto& from = f.chain.pairs[i];
            const auto& to = f.chain.pairs[e.to];
            EXPECT_TRUE(g.follows[from.clique][to.clique]);
            EXPECT_EQ(f.sys.clique_action(from.state, to.clique), to.state);
        }
        EXPECT_NEAR(sum, 1.0, 1e-9);
    }
}

TEST(Chain, RowsDoNotDependOnStart) {
    const auto& f = fig2();
    const auto other = build_chain(f.um, 1);
    for (std::size_t i = 0; i < other.pairs.size(); ++i) {
        const auto j = f.chain.index_of(other.pairs[i]);
        if (!j) continue;
        for (const auto& e : other.rows[i])
            EXPECT_NEAR(e.probability, f.chain.transition(*j, *f.chain.index_of(other.pairs[e.to])), 1e-12);
    }
}

TEST(Chain, DegenerateRootRefusedByDefault) {
    const auto net = parse_net(R"({"places":["p"],"transitions":[{"id":"t","pre":["p"],"post":["p"]}],"initial_marking":["p"]})");
    const auto g = reachability_graph(net);
    const auto sys = build_system(net, g);
    const auto um = uniform_measure(sys);
    EXPECT_THROW(build_chain(um, 0), NumericFailure);
    const auto chain = build_chain(um, 0, 1e-12, true);
    ASSERT_EQ(chain.pairs.size(), 1u);
    EXPECT_DOUBLE_EQ(chain.transition(0, 0), 1.0);
}

TEST(Lumping, ComputedChain) {
    const auto& f = fig2();
    const auto r = lumping_check(f.chain, 2);
    EXPECT_FALSE(r.lumpable);
    const std::pair<std::size_t, std::size_t> de{f.pair("M1,d"), f.pair("M1,e")};
    EXPECT_NE(std::find(r.conflicts.begin(), r.conflicts.end(), de), r.conflicts.end());
    ASSERT_TRUE(r.aggregated[0].has_value());
    EXPECT_NEAR((*r.aggregated[0])[0], kSqrt2 - 1, 1e-9);
    EXPECT_NEAR((*r.aggregated[0])[1], 2 - kSqrt2, 1e-9);
    EXPECT_FALSE(r.aggregated[1].has_value());
}

TEST(Lumping, PublishedMatrixIsNotLumpable) {
    const auto& f = fig2();
    const auto printed = reference::printed_chain(f.sys);
    const auto r = lumping_check(printed, 2);
    EXPECT_FALSE(r.lumpable);
    const std::pair<std::size_t, std::size_t> de{f.pair("M1,d"), f.pair("M1,e")};
    EXPECT_NE(std::find(r.conflicts.begin(), r.conflicts.end(), de), r.conflicts.end());
    // printed (M1,e) keeps all mass on M1, printed (M1,d) only sqrt2/2
    double d_to_m1 = 0, e_to_m1 = 0;
    for (const auto& e : printed.rows[f.pair("M1,d")])
        if (printed.pairs[e.to].state == 1) d_to_m1 += e.probability;
    for (const auto& e : printed.rows[f.pair("M1,e")])
        if (printed.pairs[e.to].state == 1) e_to_m1 += e.probability;
    EXPECT_NEAR(d_to_m1, kSqrt2 / 2, 1e-9);
    EXPECT_NEAR(e_to_m1, 1.0, 1e-9);
}

TEST(Lumping, SingleMarking) {
    // two dependent self-loops on one place: q0 = 1/2, one marking
    const auto net = parse_net(R"({"places":["p"],"transitions":[{"id":"t","pre":["p"],"post":["p"]},
        {"id":"u","pre":["p"],"post":["p"]}],"initial_marking":["p"]})");
    const auto g = reachability_graph(net);
    const auto sys = build_system(net, g);
    const auto um = uniform_measure(sys);
    const auto r = lumping_check(build_chain(um, 0), 1);
    EXPECT_TRUE(r.lumpable);
    ASSERT_TRUE(r.aggregated[0].has_value());
    EXPECT_NEAR((*r.aggregated[0])[0], 1.0, 1e-12);
}

TEST(Sampling, StepsRespectTheNet) {
    const auto& f = fig2();
    const auto& g = f.sys.clique_graph();
    for (std::uint64_t run = 0; run < 200; ++run) {
        const auto s = sample_execution(f.chain, 12, 42, run);
        ASSERT_EQ(s.steps.size(), 12u);
        std::size_t state = 0;
        for (std::size_t k = 0; k < s.steps.size(); ++k) {
            if (k > 0) ASSERT_TRUE(g.follows[s.steps[k - 1].clique][s.steps[k].clique]);
            state = *f.sys.clique_action(state, s.steps[k].clique);
            ASSERT_EQ(state, s.steps[k].state);
        }
        // the linearisation replays on the net through the firing rule
        const auto end = oracle::replay(f.net, f.net.initial_marking(), s.firing_sequence(f.chain));
        ASSERT_TRUE(end.has_value());
        ASSERT_EQ(*end, f.graph.markings[state]);
    }
}

TEST(Sampling, Reproducible) {
    const auto& f = fig2();
    const auto a = sample_executions(f.chain, 20, 50, 7);
    const auto b = sample_executions(f.chain, 20, 50, 7);
    const auto c = sample_executions(f.chain, 20, 50, 7, 4);
    for (std::size_t r = 0; r < a.size(); ++r) {
        ASSERT_EQ(a[r].steps.size(), b[r].steps.size());
        for (std::size_t k = 0; k < a[r].steps.size(); ++k) {
            ASSERT_EQ(a[r].steps[k].clique, b[r].steps[k].clique);
            ASSERT_EQ(a[r].steps[k].clique, c[r].steps[k].clique);
        }
    }
    const auto other = sample_executions(f.chain, 20, 50, 8);
    bool differs = false;
    for (std::size_t r = 0; r < a.size(); ++r)
        for (std::size_t k = 0; k < 20; ++k) differs |= a[r].steps[k].clique != other[r].steps[k].clique;
    EXPECT_TRUE(differs);
    EXPECT_THROW(sample_execution(f.chain, 0, 1), std::invalid_argument);
}

TEST(Sampling, UniformDrawsAreInRange) {
    RunRng rng(1, 2);
    for (int i = 0; i < 10000; ++i) {
        const double u = rng.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
    }
}

TEST(Validation, PassesOnTheExample) {
    const auto& f = fig2();
    const auto rep = empirical_validation(f.chain, f.um, 20000, 5, 3, 2);
    EXPECT_TRUE(rep.pass) << rep.note;
    EXPECT_EQ(rep.first_clique.size(), f.sys.cliques().size());
    EXPECT_FALSE(rep.two_clique_prefix.empty());
}

TEST(Validation, DetectsCorruptedRoot) {
    const auto& f = fig2();
    auto cc = f.um.cocycle();
    cc.q0.midpoint += 0.01;
    const UniformMeasure wrong(f.sys, cc);
    const auto rep = empirical_validation(f.chain, wrong, 100000, 2, 5, 4);
    EXPECT_FALSE(rep.pass);
    EXPECT_TRUE(std::any_of(rep.first_clique.begin(), rep.first_clique.end(),
                            [](const ValidationCell& c) { return !c.pass; }));
}

TEST(Validation, TooFewRuns) {
    const auto& f = fig2();
    EXPECT_THROW(empirical_validation(f.chain, f.um, 999, 5, 1), std::invalid_argument);
}
