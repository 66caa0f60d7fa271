#include "tracenet/random_net.hpp"

#include <random>
#include <string>

namespace tracenet {

namespace {

// Bounded draw that does not depend on the standard library's distribution
// implementations.
std::size_t below(std::mt19937_64& rng, std::size_t n) {
    return static_cast<std::size_t>(rng() % n);
}

} // namespace

PetriNet random_safe_net(std::uint64_t seed, const RandomNetOptions& options) {
    std::mt19937_64 rng(seed);
    const auto components = 1 + below(rng, options.max_components);
    std::vector<std::string> places;
    std::vector<std::vector<std::size_t>> component_places(components);
    std::vector<std::size_t> initial;
    for (std::size_t c = 0; c < components; ++c) {
        const auto size = 1 + below(rng, options.max_component_places);
        for (std::size_t i = 0; i < size; ++i) {
            component_places[c].push_back(places.size());
            places.push_back("p" + std::to_string(c) + "_" + std::to_string(i));
        }
        initial.push_back(component_places[c][below(rng, size)]);
    }

    const auto count = 1 + below(rng, options.max_transitions);
    std::vector<Transition> transitions;
    for (std::size_t t = 0; t < count; ++t) {
        Transition tr;
        tr.id = "t" + std::to_string(t);
        // Touch one component, sometimes synchronise with a second one.
        std::vector<std::size_t> touched{below(rng, components)};
        if (components > 1 && below(rng, 3) == 0) {
            auto other = below(rng, components);
            if (other != touched[0]) touched.push_back(other);
        }
        for (auto c : touched) {
            const auto& ps = component_places[c];
            tr.pre.push_back(ps[below(rng, ps.size())]);
            tr.post.push_back(ps[below(rng, ps.size())]);
        }
        transitions.push_back(std::move(tr));
    }
    return PetriNet(std::move(places), std::move(transitions), std::move(initial));
}

TraceMonoid random_monoid(std::uint64_t seed, std::size_t letters) {
    std::mt19937_64 rng(seed);
    std::vector<std::string> names;
    for (std::size_t i = 0; i < letters; ++i) names.push_back(std::string(1, static_cast<char>('a' + i)));
    std::vector<std::pair<Letter, Letter>> pairs;
    for (Letter a = 0; a < letters; ++a)
        for (Letter b = a + 1; b < letters; ++b)
            if (below(rng, 2) == 0) pairs.emplace_back(a, b);
    return TraceMonoid(std::move(names), pairs);
}

} // namespace tracenet
