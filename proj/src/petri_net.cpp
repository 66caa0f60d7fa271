#include "tracenet/petri_net.hpp"

#include "tracenet/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <deque>
#include <fstream>
#include <set>
#include <sstream>

namespace tracenet {

using json = nlohmann::ordered_json;

std::vector<std::size_t> Marking::marked_places() const {
    std::vector<std::size_t> out;
    for (std::size_t p = 0; p < tokens_.size(); ++p)
        if (tokens_[p]) out.push_back(p);
    return out;
}

bool Marking::empty() const {
    return std::none_of(tokens_.begin(), tokens_.end(), [](bool b) { return b; });
}

PetriNet::PetriNet(std::vector<std::string> places, std::vector<Transition> transitions,
                   std::vector<std::size_t> initial_marking)
    : places_(std::move(places)), transitions_(std::move(transitions)), initial_(places_.size()) {
    for (std::size_t i = 0; i < places_.size(); ++i) {
        if (!place_index_.emplace(places_[i], i).second)
            throw ParseError("/places/" + std::to_string(i), "duplicate identifier '" + places_[i] + "'");
    }
    for (std::size_t i = 0; i < transitions_.size(); ++i) {
        auto& t = transitions_[i];
        const auto loc = "/transitions/" + std::to_string(i);
        if (place_index_.count(t.id) || !transition_index_.emplace(t.id, i).second)
            throw ParseError(loc + "/id", "duplicate identifier '" + t.id + "'");
        if (t.pre.empty()) throw ParseError(loc + "/pre", "empty preset of transition '" + t.id + "'");
        if (t.post.empty()) throw ParseError(loc + "/post", "empty postset of transition '" + t.id + "'");
        for (auto* side : {&t.pre, &t.post}) {
            for (auto p : *side)
                if (p >= places_.size())
                    throw ParseError(loc, "dangling place reference in transition '" + t.id + "'");
            std::sort(side->begin(), side->end());
            if (std::adjacent_find(side->begin(), side->end()) != side->end())
                throw ParseError(loc, "duplicate place in transition '" + t.id + "'");
        }
    }
    for (auto p : initial_marking) {
        if (p >= places_.size()) throw ParseError("/initial_marking", "dangling place reference");
        if (initial_.has(p)) throw ParseError("/initial_marking", "duplicate place '" + places_[p] + "'");
        initial_.set(p, true);
    }
}

std::size_t PetriNet::transition_index(std::string_view id) const {
    auto it = transition_index_.find(std::string(id));
    if (it == transition_index_.end()) throw std::out_of_range("unknown transition '" + std::string(id) + "'");
    return it->second;
}

std::size_t PetriNet::place_index(std::string_view id) const {
    auto it = place_index_.find(std::string(id));
    if (it == place_index_.end()) throw std::out_of_range("unknown place '" + std::string(id) + "'");
    return it->second;
}

Marking PetriNet::marking_of(const std::vector<std::string>& place_ids) const {
    Marking m(places_.size());
    for (const auto& id : place_ids) m.set(place_index(id), true);
    return m;
}

std::vector<std::string> PetriNet::place_names(const Marking& m) const {
    std::vector<std::string> out;
    for (auto p : m.marked_places()) out.push_back(places_[p]);
    return out;
}

namespace {

std::vector<std::string> string_array(const json& doc, const char* key, const std::string& loc) {
    if (!doc.contains(key)) throw ParseError(loc, std::string("missing key '") + key + "'");
    const auto& arr = doc.at(key);
    if (!arr.is_array()) throw ParseError(loc + "/" + key, "expected an array of strings");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_string())
            throw ParseError(loc + "/" + key + "/" + std::to_string(i), "expected a string");
        out.push_back(arr[i].get<std::string>());
    }
    return out;
}

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& loc) {
    for (const auto& [k, v] : obj.items()) {
        bool ok = std::any_of(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; });
        if (!ok) throw ParseError(loc + "/" + k, "unknown key '" + k + "'");
    }
}

std::string line_col(std::string_view text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return std::to_string(line) + ":" + std::to_string(col);
}

} // namespace

PetriNet parse_net(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ParseError(line_col(text, e.byte == 0 ? 0 : e.byte - 1), std::string("syntax error: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("/", "expected a JSON object");
    reject_unknown_keys(doc, {"places", "transitions", "initial_marking"}, "");

    auto place_ids = string_array(doc, "places", "");
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < place_ids.size(); ++i) index.emplace(place_ids[i], i);

    auto resolve = [&](const std::vector<std::string>& ids, const std::string& loc) {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < ids.size(); ++i) {
            auto it = index.find(ids[i]);
            if (it == index.end())
                throw ParseError(loc + "/" + std::to_string(i), "dangling place reference '" + ids[i] + "'");
            out.push_back(it->second);
        }
        return out;
    };

    if (!doc.contains("transitions")) throw ParseError("", "missing key 'transitions'");
    const auto& ts = doc.at("transitions");
    if (!ts.is_array()) throw ParseError("/transitions", "expected an array");
    std::vector<Transition> transitions;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const auto loc = "/transitions/" + std::to_string(i);
        const auto& t = ts[i];
        if (!t.is_object()) throw ParseError(loc, "expected an object");
        reject_unknown_keys(t, {"id", "pre", "post"}, loc);
        if (!t.contains("id") || !t.at("id").is_string()) throw ParseError(loc + "/id", "expected a string id");
        Transition tr;
        tr.id = t.at("id").get<std::string>();
        tr.pre = resolve(string_array(t, "pre", loc), loc + "/pre");
        tr.post = resolve(string_array(t, "post", loc), loc + "/post");
        transitions.push_back(std::move(tr));
    }
    auto initial = resolve(string_array(doc, "initial_marking", ""), "/initial_marking");
    return PetriNet(std::move(place_ids), std::move(transitions), std::move(initial));
}

PetriNet load_net(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path, "cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_net(buf.str());
}

std::string canonical_json(const PetriNet& net) {
    json doc;
    doc["places"] = net.places();
    doc["transitions"] = json::array();
    for (const auto& t : net.transitions()) {
        json jt;
        jt["id"] = t.id;
        jt["pre"] = json::array();
        jt["post"] = json::array();
        for (auto p : t.pre) jt["pre"].push_back(net.places()[p]);
        for (auto p : t.post) jt["post"].push_back(net.places()[p]);
        doc["transitions"].push_back(std::move(jt));
    }
    doc["initial_marking"] = net.place_names(net.initial_marking());
    return doc.dump();
}

std::string content_hash(const PetriNet& net) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : canonical_json(net)) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

bool enables(const PetriNet& net, const Marking& m, std::size_t t) {
    const auto& pre = net.transitions().at(t).pre;
    return std::all_of(pre.begin(), pre.end(), [&](std::size_t p) { return m.has(p); });
}

bool enables(const PetriNet& net, const Marking& m, std::string_view t) {
    return enables(net, m, net.transition_index(t));
}

Marking fire(const PetriNet& net, const Marking& m, std::size_t t) {
    if (!enables(net, m, t)) throw std::logic_error("transition '" + net.transitions().at(t).id + "' is not enabled");
    const auto& tr = net.transitions()[t];
    Marking next = m;
    for (auto p : tr.pre) next.set(p, false);
    for (auto p : tr.post) next.set(p, true);
    return next;
}

Marking fire(const PetriNet& net, const Marking& m, std::string_view t) {
    return fire(net, m, net.transition_index(t));
}

ReachabilityGraph reachability_graph(const PetriNet& net, std::size_t max_states) {
    ReachabilityGraph g;
    std::unordered_map<Marking, std::size_t, Marking::Hash> seen;
    // parent[i] = (predecessor marking, transition) for witness reconstruction
    std::vector<std::pair<std::size_t, std::size_t>> parent;
    std::vector<char> ever_enabled(net.transitions().size(), 0);

    auto witness_to = [&](std::size_t i) {
        std::vector<std::string> seq;
        while (i != 0) {
            seq.push_back(net.transitions()[parent[i].second].id);
            i = parent[i].first;
        }
        std::reverse(seq.begin(), seq.end());
        return seq;
    };

    g.markings.push_back(net.initial_marking());
    seen.emplace(net.initial_marking(), 0);
    parent.emplace_back(0, 0);
    for (std::size_t i = 0; i < g.markings.size(); ++i) {
        for (std::size_t t = 0; t < net.transitions().size(); ++t) {
            const Marking m = g.markings[i];
            if (!enables(net, m, t)) continue;
            ever_enabled[t] = 1;
            const auto& tr = net.transitions()[t];
            for (auto p : tr.post) {
                if (m.has(p) && !std::binary_search(tr.pre.begin(), tr.pre.end(), p)) {
                    auto w = witness_to(i);
                    w.push_back(tr.id);
                    throw NotSafeError(std::move(w), net.places()[p]);
                }
            }
            Marking next = fire(net, m, t);
            auto [it, inserted] = seen.emplace(next, g.markings.size());
            if (inserted) {
                if (g.markings.size() >= max_states)
                    throw CapExceeded("reachable markings exceed max_states = " + std::to_string(max_states));
                g.markings.push_back(std::move(next));
                parent.emplace_back(i, t);
            }
            g.edges.push_back({i, t, it->second});
        }
    }
    for (std::size_t t = 0; t < ever_enabled.size(); ++t)
        if (!ever_enabled[t]) g.dead_transitions.push_back(t);
    return g;
}

bool distant(const PetriNet& net, std::size_t t, std::size_t u) {
    if (t == u) throw std::invalid_argument("distant(t, t) is undefined");
    const auto& a = net.transitions().at(t);
    const auto& b = net.transitions().at(u);
    std::set<std::size_t> near_t(a.pre.begin(), a.pre.end());
    near_t.insert(a.post.begin(), a.post.end());
    for (const auto* side : {&b.pre, &b.post})
        for (auto p : *side)
            if (near_t.count(p)) return false;
    return true;
}

TraceMonoid independence_alphabet(const PetriNet& net) {
    std::vector<std::string> names;
    for (const auto& t : net.transitions()) names.push_back(t.id);
    std::vector<std::pair<Letter, Letter>> pairs;
    for (std::size_t t = 0; t < names.size(); ++t)
        for (std::size_t u = t + 1; u < names.size(); ++u)
            if (distant(net, t, u)) pairs.emplace_back(static_cast<Letter>(t), static_cast<Letter>(u));
    return TraceMonoid(std::move(names), pairs);
}

} // namespace tracenet
