#pragma once

#include "tracenet/async_system.hpp"
#include "tracenet/chain_sampler.hpp"
#include "tracenet/petri_net.hpp"
#include "tracenet/uniform_measure.hpp"

#include <json.hpp>

#include <string>

namespace tracenet {

using Json = nlohmann::ordered_json;

inline constexpr int kReportSchemaVersion = 1;

Json trace_json(const TraceMonoid& m, const Trace& x);
Json polynomial_json(const IntPolynomial& p);
Json root_json(const CertifiedRoot& r);

/// Net identity, independence pairs, states and the letter action table.
Json system_json(const PetriNet& net, const ReachabilityGraph& graph, const AsyncSystem& sys);

/// mu(z), M(z), theta(z), and when `measure` is given, q0, h and Gamma.
Json analysis_json(const PetriNet& net, const ReachabilityGraph& graph, const AsyncSystem& sys,
                   const UniformMeasure* measure);

/// kappa_s for every state, keyed by state then clique label.
Json kappa_json(const UniformMeasure& um);

Json lumping_json(const CliqueChain& chain, const TraceMonoid& m, const LumpingResult& lumping);

/// Pairs, initial law, dense transition matrix and lumping verdict.
Json chain_json(const CliqueChain& chain, const UniformMeasure& um, const LumpingResult& lumping);

/// Labelled CSV of the transition matrix ("pair" header column).
std::string chain_csv(const CliqueChain& chain, const TraceMonoid& m);

/// Row-by-row comparison of the computed chain with the published one for
/// the bundled example, with oracle conditionals for mismatching rows and
/// the lumping verdicts of both matrices.
Json discrepancy_json(const CliqueChain& chain, const UniformMeasure& um, double tol = 1e-9);

Json validation_json(const ValidationReport& report);

/// One JSON-lines record per step: {"run":r,"k":k,"clique":[..],"marking":[..]}.
std::string execution_jsonl(const ExecutionSample& sample, const CliqueChain& chain, const PetriNet& net,
                            const AsyncSystem& sys);

} // namespace tracenet
