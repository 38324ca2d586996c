#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pralg/algebra.hpp"

namespace pralg {

/// A structure file: atoms with exact rational weights, named events given
/// as atom-label lists, and named subalgebras generated from event lists.
///
///   { "atoms":  [{"label": "x", "weight": "1/2"}, ...],
///     "events": {"A": ["x","y"], ...},
///     "subalgebras": {"C": ["A","B"], ...} }
struct StructureDocument {
    FiniteProbabilityAlgebra algebra;
    std::map<std::string, Event> events;
    std::map<std::string, Subalgebra> subalgebras;
};

inline StructureDocument parse_structure(const std::string& text, bool validate = true) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidStructure(std::string("structure file is not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("atoms") || !doc["atoms"].is_array())
        throw InvalidStructure("structure file needs an \"atoms\" array");
    std::vector<Rational> weights;
    std::vector<std::string> labels;
    for (const auto& atom : doc["atoms"]) {
        if (!atom.contains("label") || !atom.contains("weight"))
            throw InvalidStructure("every atom needs \"label\" and \"weight\"");
        labels.push_back(atom["label"].get<std::string>());
        weights.push_back(parse_rational(atom["weight"].get<std::string>()));
    }
    StructureDocument out{validate
                              ? FiniteProbabilityAlgebra(std::move(weights), std::move(labels))
                              : FiniteProbabilityAlgebra::unchecked(std::move(weights),
                                                                    std::move(labels)),
                          {},
                          {}};
    if (doc.contains("events")) {
        for (auto it = doc["events"].begin(); it != doc["events"].end(); ++it) {
            Bits bits(out.algebra.size());
            for (const auto& label : it.value()) {
                auto idx = out.algebra.atom_index(label.get<std::string>());
                if (!idx)
                    throw InvalidStructure("event " + it.key() + " references unknown atom " +
                                           label.get<std::string>());
                bits.set(*idx);
            }
            out.events.emplace(it.key(), Event{out.algebra.id(), bits});
        }
    }
    if (doc.contains("subalgebras")) {
        for (auto it = doc["subalgebras"].begin(); it != doc["subalgebras"].end(); ++it) {
            std::vector<Event> generators;
            for (const auto& name : it.value()) {
                auto jt = out.events.find(name.get<std::string>());
                if (jt == out.events.end())
                    throw InvalidStructure("subalgebra " + it.key() +
                                           " references unknown event " +
                                           name.get<std::string>());
                generators.push_back(jt->second);
            }
            out.subalgebras.emplace(it.key(),
                                    Subalgebra::generated(out.algebra, generators));
        }
    }
    return out;
}

inline StructureDocument load_structure(const std::string& path, bool validate = true) {
    std::ifstream in(path);
    if (!in) throw InvalidStructure("cannot open structure file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_structure(buf.str(), validate);
}

inline std::string structure_to_json(const FiniteProbabilityAlgebra& alg) {
    nlohmann::ordered_json doc;
    doc["atoms"] = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < alg.size(); ++i)
        doc["atoms"].push_back({{"label", alg.label(i)}, {"weight", rat_string(alg.weight(i))}});
    doc["events"] = nlohmann::ordered_json::object();
    return doc.dump(2);
}

/// Resolves an event expression against a document: a named event, "1"/"ALL"
/// for the full event, "0"/"EMPTY" for the empty one, or "{x,y}" listing
/// atom labels.
inline Event resolve_event(const StructureDocument& doc, const std::string& expr) {
    if (expr == "1" || expr == "ALL") return doc.algebra.full_event();
    if (expr == "0" || expr == "EMPTY") return doc.algebra.empty_event();
    if (!expr.empty() && expr.front() == '{' && expr.back() == '}') {
        Bits bits(doc.algebra.size());
        std::string inner = expr.substr(1, expr.size() - 2);
        std::stringstream ss(inner);
        std::string label;
        while (std::getline(ss, label, ',')) {
            if (label.empty()) continue;
            auto idx = doc.algebra.atom_index(label);
            if (!idx) throw InvalidStructure("unknown atom label: " + label);
            bits.set(*idx);
        }
        return Event{doc.algebra.id(), bits};
    }
    auto it = doc.events.find(expr);
    if (it == doc.events.end()) throw InvalidStructure("unknown event: " + expr);
    return it->second;
}

/// Resolves a subalgebra expression: a named subalgebra, "trivial", "full",
/// or a comma-separated list of event names to generate from.
inline Subalgebra resolve_subalgebra(const StructureDocument& doc, const std::string& expr) {
    if (expr == "trivial") return Subalgebra::trivial(doc.algebra);
    if (expr == "full") return Subalgebra::discrete(doc.algebra);
    auto it = doc.subalgebras.find(expr);
    if (it != doc.subalgebras.end()) return it->second;
    std::vector<Event> generators;
    std::stringstream ss(expr);
    std::string name;
    while (std::getline(ss, name, ',')) {
        if (name.empty()) continue;
        generators.push_back(resolve_event(doc, name));
    }
    if (generators.empty()) throw InvalidStructure("unknown subalgebra: " + expr);
    return Subalgebra::generated(doc.algebra, generators);
}

} // namespace pralg
