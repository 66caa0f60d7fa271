#pragma once

#include "tracenet/error.hpp"
#include "tracenet/petri_net.hpp"
#include "tracenet/polynomial.hpp"
#include "tracenet/trace_monoid.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tracenet {

/// Result of acting on a state: a state index, or nullopt for the sink.
using StateOrSink = std::optional<std::size_t>;

/// A trace monoid acting on a finite state set X plus the absorbing sink.
/// Clique actions are tabulated at construction.
class AsyncSystem {
public:
    /// letter_action[s][a] is s.a. Verifies that independent letters commute
    /// on every state and throws std::logic_error otherwise.
    AsyncSystem(TraceMonoid monoid, std::vector<std::string> state_labels,
                std::vector<std::vector<StateOrSink>> letter_action,
                std::size_t max_cliques = kDefaultMaxCliques);

    [[nodiscard]] const TraceMonoid& monoid() const { return monoid_; }
    [[nodiscard]] std::size_t state_count() const { return labels_.size(); }
    [[nodiscard]] const std::string& state_label(std::size_t s) const { return labels_.at(s); }
    [[nodiscard]] StateOrSink letter_action(std::size_t s, Letter a) const { return letter_action_[s][a]; }
    [[nodiscard]] const CliqueGraph& clique_graph() const { return graph_; }
    [[nodiscard]] const std::vector<Clique>& cliques() const { return graph_.cliques; }
    [[nodiscard]] StateOrSink clique_action(std::size_t s, std::size_t clique) const { return clique_action_[s][clique]; }

    /// Markings behind the states when built from a net; empty otherwise.
    [[nodiscard]] const std::vector<Marking>& markings() const { return markings_; }
    void attach_markings(std::vector<Marking> markings);

private:
    TraceMonoid monoid_;
    std::vector<std::string> labels_;
    std::vector<std::vector<StateOrSink>> letter_action_;
    CliqueGraph graph_;
    std::vector<std::vector<StateOrSink>> clique_action_;
    std::vector<Marking> markings_;
};

/// States are the reachable markings (labelled M0, M1, ... in discovery
/// order); s.t is the fired marking or the sink when t is not enabled.
AsyncSystem build_system(const PetriNet& net, const ReachabilityGraph& graph,
                         std::size_t max_cliques = kDefaultMaxCliques);

StateOrSink act(const AsyncSystem& sys, std::size_t s, std::span<const Letter> word);
StateOrSink act(const AsyncSystem& sys, std::size_t s, const Trace& x);

bool is_irreducible(const AsyncSystem& sys);

/// M[s][t] = sum over cliques c (epsilon included) with s.c = t of (-1)^|c| z^|c|.
PolyMatrix mobius_matrix(const AsyncSystem& sys);

/// counts[s][t][k] = number of traces x with |x| = k and s.x = t, by
/// dynamic programming over (last clique, state) along normal-pair edges.
using GrowthTable = std::vector<std::vector<std::vector<std::int64_t>>>;
GrowthTable growth_matrix_coefficients(const AsyncSystem& sys, std::size_t n);

/// Coefficients of (G M)[s][u] through order n; the identity when the
/// inverse relation holds.
GrowthTable truncated_product(const GrowthTable& g, const PolyMatrix& m, std::size_t n);

/// theta(z) = det M(z).
IntPolynomial theta_polynomial(const AsyncSystem& sys);

/// Smallest positive root of theta, in (0, 1]. Throws NotIrreducible when
/// the action is reducible and NumericFailure when theta has no root there.
/// The enclosure is refined to at most min(tol, 1e-15).
CertifiedRoot characteristic_root(const AsyncSystem& sys, double tol);

struct Cocycle {
    CertifiedRoot q0;
    /// Positive state weights with h[0] = 1.
    std::vector<double> h;
    /// gamma[s][t] = h[t] / h[s]; stored as a table so that tests can inject
    /// faults into single entries.
    std::vector<std::vector<double>> gamma;
    /// Singular values of M(q0), descending.
    std::vector<double> singular_values;
    /// max_s |(M(q0) h)_s|
    double residual = 0.0;
    /// theta(1) == 0 and the root enclosure touches 1: cylinder values do
    /// not decay with length.
    bool degenerate = false;
};

/// Kernel of M(q0) has dimension >= 2 at the requested tolerance.
struct KernelDegenerate : NumericFailure {
    KernelDegenerate(const std::string& what, std::vector<std::vector<double>> basis)
        : NumericFailure(what), basis(std::move(basis)) {}
    std::vector<std::vector<double>> basis;
};

/// Solves M(q0) h = 0 for a positive h via SVD. Throws KernelDegenerate when
/// more than one singular value is below tol * max(1, sigma_max) and
/// NumericFailure when the kernel vector is not strictly positive or the
/// residual exceeds tol.
Cocycle cocycle(const AsyncSystem& sys, const CertifiedRoot& q0, double tol = 1e-9);

/// Evaluates every entry of M at z.
std::vector<std::vector<double>> evaluate(const PolyMatrix& m, double z);

} // namespace tracenet
