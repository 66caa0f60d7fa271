#pragma once

#include "tracenet/trace_monoid.hpp"

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace tracenet {

inline constexpr std::size_t kDefaultMaxStates = std::size_t{1} << 20;

/// 1-safe marking: the set of marked places over the net's place order.
class Marking {
public:
    Marking() = default;
    explicit Marking(std::size_t places) : tokens_(places, false) {}

    [[nodiscard]] std::size_t place_count() const { return tokens_.size(); }
    [[nodiscard]] bool has(std::size_t place) const { return tokens_.at(place); }
    void set(std::size_t place, bool marked) { tokens_.at(place) = marked; }
    [[nodiscard]] std::vector<std::size_t> marked_places() const;
    [[nodiscard]] bool empty() const;

    friend bool operator==(const Marking&, const Marking&) = default;

    struct Hash {
        std::size_t operator()(const Marking& m) const noexcept {
            return std::hash<std::vector<bool>>{}(m.tokens_);
        }
    };

private:
    std::vector<bool> tokens_;
};

struct Transition {
    std::string id;
    std::vector<std::size_t> pre;  // sorted place indices
    std::vector<std::size_t> post; // sorted place indices
};

class PetriNet {
public:
    /// Validates the structure; throws ParseError with a JSON-pointer style
    /// location on duplicate identifiers, empty presets/postsets or dangling
    /// place references.
    PetriNet(std::vector<std::string> places, std::vector<Transition> transitions,
             std::vector<std::size_t> initial_marking);

    [[nodiscard]] const std::vector<std::string>& places() const { return places_; }
    [[nodiscard]] const std::vector<Transition>& transitions() const { return transitions_; }
    [[nodiscard]] const Marking& initial_marking() const { return initial_; }

    /// Throws std::out_of_range("unknown transition ...").
    [[nodiscard]] std::size_t transition_index(std::string_view id) const;
    [[nodiscard]] std::size_t place_index(std::string_view id) const;

    [[nodiscard]] Marking marking_of(const std::vector<std::string>& place_ids) const;
    [[nodiscard]] std::vector<std::string> place_names(const Marking& m) const;

private:
    std::vector<std::string> places_;
    std::vector<Transition> transitions_;
    Marking initial_;
    std::unordered_map<std::string, std::size_t> place_index_;
    std::unordered_map<std::string, std::size_t> transition_index_;
};

/// Parses the JSON net document
/// {"places":[...],"transitions":[{"id":..,"pre":[..],"post":[..]}],"initial_marking":[..]}.
/// Unknown keys are rejected.
PetriNet parse_net(std::string_view text);
PetriNet load_net(const std::string& path);
/// Canonical compact JSON form of the net (document order preserved).
std::string canonical_json(const PetriNet& net);
/// FNV-1a 64 of canonical_json, as 16 hex digits.
std::string content_hash(const PetriNet& net);

bool enables(const PetriNet& net, const Marking& m, std::size_t t);
bool enables(const PetriNet& net, const Marking& m, std::string_view t);
/// Throws std::logic_error if t is not enabled at m.
Marking fire(const PetriNet& net, const Marking& m, std::size_t t);
Marking fire(const PetriNet& net, const Marking& m, std::string_view t);

struct ReachabilityEdge {
    std::size_t from;
    std::size_t transition;
    std::size_t to;
};

struct ReachabilityGraph {
    /// BFS discovery order; index 0 is the initial marking.
    std::vector<Marking> markings;
    /// Every enabled (marking, transition) pair, sorted by (from, transition).
    std::vector<ReachabilityEdge> edges;
    /// Transitions never enabled at a reachable marking.
    std::vector<std::size_t> dead_transitions;
};

/// Breadth-first closure of the initial marking. Throws NotSafeError on a
/// contact situation and CapExceeded past max_states.
ReachabilityGraph reachability_graph(const PetriNet& net, std::size_t max_states = kDefaultMaxStates);

/// (pre t U post t) and (pre u U post u) are disjoint. Throws
/// std::invalid_argument when t == u.
bool distant(const PetriNet& net, std::size_t t, std::size_t u);
/// Sigma = T with the distant pairs as independence relation.
TraceMonoid independence_alphabet(const PetriNet& net);

} // namespace tracenet
