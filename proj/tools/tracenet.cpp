// tracenet: command-line front end for the 1-safe net / trace monoid toolkit.
//
// Exit codes: 0 ok, 1 a verify check or --validate failed, 2 invalid net,
// 3 net not 1-safe, 4 action not irreducible, 5 numeric failure, 6 resource
// cap exceeded, 64 bad command line.

#include "tracenet/async_system.hpp"
#include "tracenet/chain_sampler.hpp"
#include "tracenet/petri_net.hpp"
#include "tracenet/reference.hpp"
#include "tracenet/report.hpp"
#include "tracenet/uniform_measure.hpp"
#include "tracenet/verify.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <thread>

using namespace tracenet;

namespace {

enum Exit : int {
    kOk = 0,
    kCheckFailed = 1,
    kInvalidNet = 2,
    kNotSafe = 3,
    kNotIrreducible = 4,
    kNumericFailure = 5,
    kCapExceeded = 6,
    kUsage = 64,
};

struct RunConfig {
    std::string command;
    std::string net_path;
    double tolerance = 1e-12;
    double prob_tolerance = 1e-9;
    std::uint64_t seed = 0;
    std::size_t steps = 20;
    std::size_t runs = 1;
    std::size_t depth = 2;
    std::optional<std::size_t> length;
    std::string format;
    std::string output;
    bool no_timestamp = false;
    std::size_t max_states = kDefaultMaxStates;
    std::size_t max_cliques = kDefaultMaxCliques;
    bool validate = false;
    unsigned threads = 1;
    bool inject_gamma_fault = false;
    std::size_t random_nets = 0;
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty() && path != "-") {
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
            if (!*file_) throw UsageError("cannot open output file " + path);
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

Json header(const RunConfig& cfg) {
    Json j;
    j["schema_version"] = kReportSchemaVersion;
    j["command"] = cfg.command;
    j["input"] = cfg.net_path;
    if (!cfg.no_timestamp) {
        const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        std::tm tm{};
        gmtime_r(&now, &tm);
        char buf[32];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
        j["generated_at"] = buf;
    }
    return j;
}

void emit(const RunConfig& cfg, const Json& doc) {
    Output out(cfg.output);
    out.stream() << doc.dump(2) << "\n";
}

void require_format(const RunConfig& cfg, std::initializer_list<const char*> allowed) {
    if (cfg.format.empty()) return;
    for (const char* f : allowed)
        if (cfg.format == f) return;
    throw UsageError("format '" + cfg.format + "' is not supported by " + cfg.command);
}

struct Pipeline {
    PetriNet net;
    ReachabilityGraph graph;
    AsyncSystem sys;
};

std::unique_ptr<Pipeline> load(const RunConfig& cfg) {
    auto net = load_net(cfg.net_path);
    auto graph = reachability_graph(net, cfg.max_states);
    auto sys = build_system(net, graph, cfg.max_cliques);
    for (auto t : graph.dead_transitions)
        std::cerr << "warning: transition '" << net.transitions()[t].id << "' is never enabled\n";
    return std::make_unique<Pipeline>(Pipeline{std::move(net), std::move(graph), std::move(sys)});
}

// A degenerate q0 = 1 still gives a valid (Dirac) measure; the chain is
// built but the report carries the flag.
CliqueChain chain_for(const UniformMeasure& um) {
    if (um.cocycle().degenerate)
        std::cerr << "warning: degenerate characteristic root q0 = 1; the execution is deterministic\n";
    return build_chain(um, 0, 1e-12, true);
}

int cmd_analyze(const RunConfig& cfg) {
    require_format(cfg, {"json"});
    const auto p = load(cfg);
    const auto um = uniform_measure(p->sys, cfg.tolerance, cfg.prob_tolerance);
    Json doc = header(cfg);
    doc.update(analysis_json(p->net, p->graph, p->sys, &um));
    doc["kappa"] = kappa_json(um);
    emit(cfg, doc);
    return kOk;
}

int cmd_chain(const RunConfig& cfg) {
    require_format(cfg, {"json", "csv"});
    const auto p = load(cfg);
    const auto um = uniform_measure(p->sys, cfg.tolerance, cfg.prob_tolerance);
    const auto chain = chain_for(um);
    const auto lumping = lumping_check(chain, p->sys.state_count(), cfg.prob_tolerance);
    if (cfg.format == "csv") {
        Output out(cfg.output);
        out.stream() << chain_csv(chain, p->sys.monoid());
        return kOk;
    }
    Json doc = header(cfg);
    doc["net_hash"] = content_hash(p->net);
    doc["degenerate_q0"] = um.cocycle().degenerate;
    doc.update(chain_json(chain, um, lumping));
    if (reference::is_fig2(p->net)) doc["discrepancy"] = discrepancy_json(chain, um, cfg.prob_tolerance);
    emit(cfg, doc);
    return kOk;
}

int cmd_sample(const RunConfig& cfg) {
    const auto p = load(cfg);
    const auto um = uniform_measure(p->sys, cfg.tolerance, cfg.prob_tolerance);
    const auto chain = chain_for(um);

    if (cfg.validate) {
        require_format(cfg, {"json"});
        const auto rep = empirical_validation(chain, um, cfg.runs, cfg.steps, cfg.seed, cfg.threads);
        Json doc = header(cfg);
        doc["seed"] = cfg.seed;
        doc.update(validation_json(rep));
        emit(cfg, doc);
        return rep.pass ? kOk : kCheckFailed;
    }

    require_format(cfg, {"jsonl", "firings"});
    const auto samples = sample_executions(chain, cfg.steps, cfg.runs, cfg.seed, cfg.threads);
    Output out(cfg.output);
    for (const auto& s : samples) {
        if (cfg.format == "firings") {
            std::string line;
            for (auto a : s.firing_sequence(chain)) {
                if (!line.empty()) line += ' ';
                line += p->sys.monoid().name(a);
            }
            out.stream() << line << "\n";
        } else {
            out.stream() << execution_jsonl(s, chain, p->net, p->sys);
        }
    }
    return kOk;
}

Json checks_json(const VerifyReport& rep) {
    Json arr = Json::array();
    for (const auto& c : rep.checks)
        arr.push_back({{"check", c.name}, {"status", to_string(c.status)}, {"residual", c.residual}, {"detail", c.detail}});
    return arr;
}

int cmd_verify(const RunConfig& cfg) {
    require_format(cfg, {"json"});
    const auto p = load(cfg);
    VerifyOptions opt;
    opt.order = cfg.length.value_or(10);
    opt.depth = cfg.depth;
    opt.root_tolerance = cfg.tolerance;
    opt.probability_tolerance = cfg.prob_tolerance;
    opt.inject_gamma_fault = cfg.inject_gamma_fault;
    if (opt.depth < 1 || opt.depth > 3) throw UsageError("--depth must be 1, 2 or 3");

    VerifyReport rep;
    verify_system(p->sys, opt, rep);

    if (reference::is_fig2(p->net) && !cfg.inject_gamma_fault) {
        const auto um = uniform_measure(p->sys, cfg.tolerance, cfg.prob_tolerance);
        const auto chain = chain_for(um);
        const auto d = discrepancy_json(chain, um, cfg.prob_tolerance);
        std::size_t kappa_ok = 0;
        for (const auto& [label, v] : d["kappa"].items())
            if (v["matches"].get<bool>()) ++kappa_ok;
        rep.checks.push_back({"reference_kappa", kappa_ok == d["kappa"].size() ? CheckStatus::Pass : CheckStatus::Fail,
                              0.0, std::to_string(kappa_ok) + " of " + std::to_string(d["kappa"].size()) +
                                       " published first-clique weights"});
        // Closed form of the state weight ratio for this net.
        const double q = um.q0();
        const double lambda = (-1.0 + 3.0 * q) / (1.0 - 2.0 * q);
        const double ratio = um.cocycle().h[1] / um.cocycle().h[0];
        const double gap = std::abs(lambda - ratio);
        rep.checks.push_back({"reference_lambda", gap <= cfg.prob_tolerance ? CheckStatus::Pass : CheckStatus::Fail,
                              gap, "(3 q0 - 1) / (1 - 2 q0) against h(M1) / h(M0)"});
        const auto rows = d["rows_matching"].get<std::size_t>();
        rep.checks.push_back({"reference_rows", rows == 9 ? CheckStatus::Pass : CheckStatus::Fail, 0.0,
                              std::to_string(rows) + " of 10 published rows; row M1,b differs"});
    }
    if (cfg.random_nets > 0) verify_random_nets(cfg.random_nets, cfg.seed, opt, rep);

    Json doc = header(cfg);
    doc["pass"] = rep.pass();
    doc["summary"] = {{"pass", rep.count(CheckStatus::Pass)},
                      {"fail", rep.count(CheckStatus::Fail)},
                      {"skip", rep.count(CheckStatus::Skip)}};
    doc["checks"] = checks_json(rep);
    emit(cfg, doc);
    return rep.pass() ? kOk : kCheckFailed;
}

int cmd_enumerate(const RunConfig& cfg) {
    require_format(cfg, {"json"});
    const auto p = load(cfg);
    const auto n = cfg.length.value_or(6);
    const auto& m = p->sys.monoid();
    const auto states = p->sys.state_count();

    const auto lambda = growth_coefficients(m, n, cfg.max_cliques);
    const auto counts = count_traces(m, n, kDefaultMaxEnumerationLength, cfg.max_cliques);
    const auto dp = growth_matrix_coefficients(p->sys, n);
    GrowthTable brute(states, std::vector<std::vector<std::int64_t>>(states, std::vector<std::int64_t>(n + 1, 0)));
    for (const auto& x : enumerate_traces(m, n, kDefaultMaxEnumerationLength, cfg.max_cliques)) {
        const auto word = linearize(x);
        for (std::size_t s = 0; s < states; ++s)
            if (auto t = act(p->sys, s, word)) ++brute[s][*t][word.size()];
    }

    Json doc = header(cfg);
    doc["length"] = n;
    doc["lambda"] = {{"recurrence", lambda}, {"enumeration", counts}, {"agree", [&] {
                          for (std::size_t k = 0; k <= n; ++k)
                              if (counts[k] != static_cast<std::uint64_t>(lambda[k])) return false;
                          return true;
                      }()}};
    auto table = [&](const GrowthTable& g) {
        Json out = Json::object();
        for (std::size_t s = 0; s < states; ++s) {
            Json row = Json::object();
            for (std::size_t t = 0; t < states; ++t) row[p->sys.state_label(t)] = g[s][t];
            out[p->sys.state_label(s)] = row;
        }
        return out;
    };
    doc["growth_matrix"] = {{"recurrence", table(dp)}, {"enumeration", table(brute)}, {"agree", dp == brute}};
    emit(cfg, doc);
    return kOk;
}

void add_common(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("net", cfg.net_path, "Net document (JSON)")->required();
    sub->add_option("--tolerance", cfg.tolerance, "Root enclosure width")->check(CLI::PositiveNumber);
    sub->add_option("--prob-tolerance", cfg.prob_tolerance, "Probability comparison tolerance")
        ->check(CLI::PositiveNumber);
    sub->add_option("--format", cfg.format, "json | csv | jsonl | firings");
    sub->add_option("--output,-o", cfg.output, "Write to PATH instead of stdout");
    sub->add_flag("--no-timestamp", cfg.no_timestamp, "Omit generated_at from reports");
    sub->add_option("--max-states", cfg.max_states, "Reachable marking cap")->check(CLI::PositiveNumber);
}

int run(int argc, char** argv) {
    RunConfig cfg;
    CLI::App app{"Uniform random executions of 1-safe Petri nets"};
    app.require_subcommand(1);

    auto* analyze = app.add_subcommand("analyze", "Moebius matrix, theta, q0 and cocycle");
    auto* chain = app.add_subcommand("chain", "States-and-cliques Markov chain and lumping check");
    auto* sample = app.add_subcommand("sample", "Sample executions from the chain");
    auto* verify = app.add_subcommand("verify", "Run the oracle suite");
    auto* enumerate = app.add_subcommand("enumerate", "Growth coefficients, recurrence against brute force");
    for (auto* sub : {analyze, chain, sample, verify, enumerate}) add_common(sub, cfg);

    sample->add_option("--seed", cfg.seed, "Base seed");
    sample->add_option("--steps", cfg.steps, "Cliques per execution")->check(CLI::PositiveNumber);
    sample->add_option("--runs", cfg.runs, "Number of executions")->check(CLI::PositiveNumber);
    sample->add_option("--threads", cfg.threads, "Worker threads (output does not depend on it)")
        ->check(CLI::PositiveNumber);
    sample->add_flag("--validate", cfg.validate, "Compare sampled frequencies with kappa and the prefix oracle");

    verify->add_option("--depth", cfg.depth, "Prefix depth for the oracle comparison (1-3)");
    verify->add_option("--length", cfg.length, "Truncation order of G(z) M(z) = I");
    verify->add_option("--seed", cfg.seed, "Seed of the first random net");
    verify->add_option("--random-nets", cfg.random_nets, "Also verify N seed-generated nets");
    verify->add_flag("--inject-gamma-fault", cfg.inject_gamma_fault, "Perturb one cocycle entry");

    enumerate->add_option("--length", cfg.length, "Longest trace length")->check(CLI::NonNegativeNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }
    cfg.command = app.get_subcommands().front()->get_name();

    if (const char* env = std::getenv("TRACENET_MAX_CLIQUES")) {
        try {
            cfg.max_cliques = std::stoull(env);
        } catch (const std::exception&) {
            std::cerr << "error: TRACENET_MAX_CLIQUES must be a positive integer\n";
            return kUsage;
        }
    }

    try {
        if (cfg.command == "analyze") return cmd_analyze(cfg);
        if (cfg.command == "chain") return cmd_chain(cfg);
        if (cfg.command == "sample") return cmd_sample(cfg);
        if (cfg.command == "verify") return cmd_verify(cfg);
        return cmd_enumerate(cfg);
    } catch (const ParseError& e) {
        std::cerr << "error: invalid net: " << e.what() << "\n";
        return kInvalidNet;
    } catch (const NotSafeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNotSafe;
    } catch (const NotIrreducible& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNotIrreducible;
    } catch (const KernelDegenerate& e) {
        std::cerr << "error: " << e.what() << "\n";
        for (const auto& v : e.basis) {
            std::cerr << "  kernel vector:";
            for (double x : v) std::cerr << " " << x;
            std::cerr << "\n";
        }
        return kNumericFailure;
    } catch (const NumericFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNumericFailure;
    } catch (const CapExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kCapExceeded;
    } catch (const std::overflow_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kCapExceeded;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
}

} // namespace

int main(int argc, char** argv) {
    return run(argc, argv);
}
