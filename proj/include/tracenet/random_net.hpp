#pragma once

#include "tracenet/petri_net.hpp"
#include "tracenet/trace_monoid.hpp"

#include <cstdint>

namespace tracenet {

struct RandomNetOptions {
    std::size_t max_transitions = 6;
    std::size_t max_components = 3;
    std::size_t max_component_places = 3;
};

/// Seed-determined 1-safe net. Places are split into components, each
/// holding exactly one token; every transition moves the token of one or
/// more components, so no reachable marking can exceed one token per place.
PetriNet random_safe_net(std::uint64_t seed, const RandomNetOptions& options = {});

/// Seed-determined monoid on `letters` letters, each pair independent with
/// probability one half.
TraceMonoid random_monoid(std::uint64_t seed, std::size_t letters);

} // namespace tracenet
