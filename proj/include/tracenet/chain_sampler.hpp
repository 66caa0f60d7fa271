#pragma once

#include "tracenet/uniform_measure.hpp"

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace tracenet {

/// A chain state: the clique just fired and the state reached after it.
struct ChainPair {
    std::size_t state = 0;
    std::size_t clique = 0;

    friend auto operator<=>(const ChainPair&, const ChainPair&) = default;
};

struct ChainEntry {
    std::size_t to;
    double probability;
};

/// Markov chain of states-and-cliques for a fixed initial state.
struct CliqueChain {
    std::size_t start_state = 0;
    /// Sorted by (state, clique order).
    std::vector<ChainPair> pairs;
    /// Law of the first pair, aligned with `pairs`.
    std::vector<double> initial;
    /// Sparse rows aligned with `pairs`, entries sorted by target.
    std::vector<std::vector<ChainEntry>> rows;
    /// Copy of the system's clique list, so samples can be linearised.
    std::vector<Clique> cliques;
    std::vector<std::string> state_labels;

    [[nodiscard]] std::optional<std::size_t> index_of(ChainPair p) const;
    [[nodiscard]] double transition(std::size_t from, std::size_t to) const;
    [[nodiscard]] std::string label(const TraceMonoid& m, std::size_t pair) const;
};

/// Pair (s0.c, c) gets kappa_s0(c). Absent pairs have probability 0.
std::map<ChainPair, double> initial_law(const UniformMeasure& um, std::size_t s0, double zero_slack = 1e-12);

/// Pairs reachable from the initial law; from (s, c) the next clique d is
/// drawn from kappa_s restricted to {d : c -> d} and renormalised. Throws
/// NumericFailure for a reachable pair with no continuation mass, and for a
/// degenerate q0 = 1 unless `allow_degenerate` (the measure is then carried
/// by a single infinite execution, and the chain is deterministic).
CliqueChain build_chain(const UniformMeasure& um, std::size_t s0, double zero_slack = 1e-12,
                        bool allow_degenerate = false);

struct LumpingResult {
    bool lumpable = true;
    /// aggregated[s] = next-state mass from the pairs with state s, or
    /// nullopt when those rows disagree (or there are no such pairs).
    std::vector<std::optional<std::vector<double>>> aggregated;
    /// Every pair of rows (i < j) in one group whose next-state masses
    /// differ beyond the tolerance.
    std::vector<std::pair<std::size_t, std::size_t>> conflicts;
};

/// Strong lumpability of the pair chain under the projection onto states.
LumpingResult lumping_check(const CliqueChain& chain, std::size_t state_count, double tol = 1e-9);

/// Per-run random stream: std::mt19937_64 seeded from (seed, run) through
/// std::seed_seq, with doubles formed from the top 53 bits. Both are fixed
/// by the standard, so streams are identical on every platform.
class RunRng {
public:
    RunRng(std::uint64_t seed, std::uint64_t run);
    /// Uniform on [0, 1).
    double uniform();

private:
    std::mt19937_64 engine_;
};

struct ExecutionStep {
    std::size_t clique;
    std::size_t state; // state after the clique
};

struct ExecutionSample {
    std::uint64_t seed = 0;
    std::uint64_t run = 0;
    std::vector<ExecutionStep> steps;

    /// Letters of each clique in turn.
    [[nodiscard]] std::vector<Letter> firing_sequence(const CliqueChain& chain) const;
};

/// First pair from the initial law, then steps - 1 transitions, by inverse
/// CDF over the canonical row order. Throws std::invalid_argument when
/// steps == 0.
ExecutionSample sample_execution(const CliqueChain& chain, std::size_t steps, std::uint64_t seed,
                                 std::uint64_t run = 0);

/// Runs 0..runs-1 with their own substreams; the result does not depend on
/// `threads`.
std::vector<ExecutionSample> sample_executions(const CliqueChain& chain, std::size_t steps, std::size_t runs,
                                               std::uint64_t seed, unsigned threads = 1);

struct ValidationCell {
    std::string label;
    double expected = 0.0;
    std::uint64_t count = 0;
    double frequency = 0.0;
    double z = 0.0;
    bool pass = true;
};

struct ValidationReport {
    std::size_t runs = 0;
    std::size_t steps = 0;
    double threshold = 4.0;
    std::vector<ValidationCell> first_clique;
    std::vector<ValidationCell> two_clique_prefix;
    bool pass = true;
    /// Number of cells tested and the per-cell level the 4-sigma rule
    /// corresponds to under a Bonferroni correction.
    std::string note;
};

inline constexpr std::size_t kMinValidationRuns = 1000;

/// Samples `runs` executions and compares first-clique frequencies with
/// clique_weights of `um` and two-clique prefix frequencies with
/// prefix_probability_oracle. Throws std::invalid_argument when runs is
/// below kMinValidationRuns.
ValidationReport empirical_validation(const CliqueChain& chain, const UniformMeasure& um, std::size_t runs,
                                      std::size_t steps, std::uint64_t seed, unsigned threads = 1);

} // namespace tracenet
