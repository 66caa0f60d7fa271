#pragma once

#include "tracenet/async_system.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace tracenet {

/// The uniform measure nu_s(up x) = q0^|x| Gamma(s, s.x) of an asynchronous
/// system. Holds a reference to the system, which must outlive it. The
/// cocycle is taken as given; use cocycle() to obtain a validated one.
class UniformMeasure {
public:
    UniformMeasure(const AsyncSystem& system, Cocycle cocycle);

    [[nodiscard]] const AsyncSystem& system() const { return *system_; }
    [[nodiscard]] const Cocycle& cocycle() const { return cocycle_; }
    [[nodiscard]] double q0() const { return cocycle_.q0.midpoint; }
    [[nodiscard]] double gamma(std::size_t s, std::size_t t) const { return cocycle_.gamma[s][t]; }

private:
    const AsyncSystem* system_;
    Cocycle cocycle_;
};

/// Runs the whole analysis: characteristic root and validated cocycle.
UniformMeasure uniform_measure(const AsyncSystem& sys, double root_tol = 1e-12, double tol = 1e-9);

/// Probability of the visual cylinder of x under nu_s; 0 when s.x is the sink.
double cylinder_probability(const UniformMeasure& um, std::size_t s, const Trace& x);
/// Same, for a cylinder whose length and end state are already known.
double cylinder_probability(const UniformMeasure& um, std::size_t s, std::size_t length, StateOrSink end);

/// Law of the first normal-form clique under nu_s, indexed like
/// system().cliques().
struct FirstCliqueLaw {
    std::size_t state = 0;
    std::vector<double> weights;
};

/// Raw Moebius inversion over super-cliques,
///   kappa_s(c) = sum_{c' >= c, s.c' != sink} (-1)^(|c'|-|c|) nu_s(up c'),
/// without clamping or normalisation checks.
std::vector<double> clique_weights(const UniformMeasure& um, std::size_t s);

/// clique_weights with |w| <= zero_slack clamped to 0. Throws
/// NumericFailure on weights below -zero_slack or a total mass further than
/// sum_tol from 1.
FirstCliqueLaw first_clique_law(const UniformMeasure& um, std::size_t s, double zero_slack = 1e-12,
                                double sum_tol = 1e-9);

struct OracleLimits {
    std::size_t max_depth = 3;
    /// Distinct violation cylinders intersecting up(prefix).
    std::size_t max_generators = 32;
    /// Inclusion-exclusion terms evaluated.
    std::size_t max_terms = std::size_t{1} << 22;
};

/// nu_s(C1 = c1, ..., Ck = ck), computed by inclusion-exclusion over the
/// cylinders that would merge an extra letter into one of the prefix
/// cliques, with intersections taken through trace_lub. Independent of
/// clique_weights. Throws std::invalid_argument if the prefix is not a
/// normal sequence and CapExceeded past the limits.
double prefix_probability_oracle(const UniformMeasure& um, std::size_t s, std::span<const Clique> prefix,
                                 const OracleLimits& limits = {});

} // namespace tracenet
