#pragma once
// Spec document I/O. The on-disk format is a JSON document holding the
// construct list; `parse_spec` resolves hierarchy links and rejects
// duplicate or dangling ids, `serialize_spec` emits a canonical form
// that round-trips through `parse_spec`.

#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "formav/errors.hpp"
#include "formav/spec_model.hpp"

namespace formav {

namespace detail {

inline std::string to_string(SourceKind k) {
    return k == SourceKind::definitional ? "definitional" : "mirror";
}
inline std::string to_string(ModelKind m) {
    return m == ModelKind::formative ? "formative" : "reflective";
}
inline std::string to_string(WeightSource w) {
    switch (w) {
        case WeightSource::cvr: return "cvr";
        case WeightSource::researcher_rating: return "researcher_rating";
        default: return "manual";
    }
}

inline SourceKind source_kind_from(const std::string& s) {
    if (s == "definitional") return SourceKind::definitional;
    if (s == "mirror") return SourceKind::mirror;
    throw ParseError("unknown source_kind '" + s + "'");
}
inline ModelKind model_kind_from(const std::string& s) {
    if (s == "formative") return ModelKind::formative;
    if (s == "reflective") return ModelKind::reflective;
    throw ParseError("unknown model '" + s + "'");
}
inline WeightSource weight_source_from(const std::string& s) {
    if (s == "cvr") return WeightSource::cvr;
    if (s == "researcher_rating") return WeightSource::researcher_rating;
    if (s == "manual") return WeightSource::manual;
    throw ParseError("unknown weight_source '" + s + "'");
}

}  // namespace detail

inline constexpr int spec_format_version = 1;

// Parses a spec document from JSON text. Throws ParseError on
// malformed input and ReferenceError on duplicate ids or dangling
// child links. Parent pointers are materialized from children lists.
inline MeasurementSpec parse_spec(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("spec document is not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("constructs") || !doc["constructs"].is_array())
        throw ParseError("spec document must be an object with a 'constructs' array");

    MeasurementSpec spec;
    try {
        for (const auto& jc : doc["constructs"]) {
            ConstructSpec c;
            c.construct_id = jc.at("construct_id").get<std::string>();
            c.name = jc.value("name", c.construct_id);
            c.model = detail::model_kind_from(jc.value("model", "formative"));
            c.weight_source = detail::weight_source_from(jc.value("weight_source", "manual"));
            if (jc.contains("items")) {
                for (const auto& ji : jc["items"]) {
                    ItemSpec it;
                    it.item_id = ji.at("item_id").get<std::string>();
                    it.prompt = ji.value("prompt", "");
                    it.scale_min = ji.value("scale_min", 1);
                    it.scale_max = ji.value("scale_max", 5);
                    it.source_kind = detail::source_kind_from(ji.value("source_kind", "definitional"));
                    it.citation = ji.value("citation", "");
                    it.reverse_coded = ji.value("reverse_coded", false);
                    c.items.push_back(std::move(it));
                }
            }
            if (jc.contains("children"))
                c.children = jc["children"].get<std::vector<std::string>>();
            if (jc.contains("manual_weights"))
                c.manual_weights = jc["manual_weights"].get<std::vector<double>>();
            spec.constructs.push_back(std::move(c));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("spec document has a malformed field: ") + e.what());
    }

    // Uniqueness across the whole spec.
    std::set<std::string> cids, iids;
    for (const auto& c : spec.constructs) {
        if (!cids.insert(c.construct_id).second)
            throw ReferenceError("duplicate construct_id '" + c.construct_id + "'");
        for (const auto& it : c.items)
            if (!iids.insert(it.item_id).second)
                throw ReferenceError("duplicate item_id '" + it.item_id + "'");
    }

    // Materialize hierarchy links.
    std::map<std::string, std::string> parent_of;
    for (const auto& c : spec.constructs) {
        for (const auto& child : c.children) {
            if (!cids.count(child))
                throw ReferenceError("construct '" + c.construct_id +
                                     "' references unknown child '" + child + "'");
            auto [pos, inserted] = parent_of.emplace(child, c.construct_id);
            if (!inserted)
                throw ReferenceError("construct '" + child + "' is claimed by two parents ('" +
                                     pos->second + "' and '" + c.construct_id + "')");
        }
    }
    for (auto& c : spec.constructs) {
        auto it = parent_of.find(c.construct_id);
        if (it != parent_of.end()) c.parent = it->second;
    }
    return spec;
}

inline MeasurementSpec load_spec_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open spec file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_spec(buf.str());
}

// Canonical serialization: fixed key order, parent links omitted
// (they are derived). parse_spec(serialize_spec(s)) == s for any spec
// whose parent links are consistent with its children lists.
inline std::string serialize_spec(const MeasurementSpec& spec) {
    nlohmann::ordered_json doc;
    doc["spec_version"] = spec_format_version;
    doc["constructs"] = nlohmann::ordered_json::array();
    for (const auto& c : spec.constructs) {
        nlohmann::ordered_json jc;
        jc["construct_id"] = c.construct_id;
        jc["name"] = c.name;
        jc["model"] = detail::to_string(c.model);
        jc["weight_source"] = detail::to_string(c.weight_source);
        if (!c.items.empty()) {
            jc["items"] = nlohmann::ordered_json::array();
            for (const auto& it : c.items) {
                nlohmann::ordered_json ji;
                ji["item_id"] = it.item_id;
                ji["prompt"] = it.prompt;
                ji["scale_min"] = it.scale_min;
                ji["scale_max"] = it.scale_max;
                ji["source_kind"] = detail::to_string(it.source_kind);
                ji["citation"] = it.citation;
                if (it.reverse_coded) ji["reverse_coded"] = true;
                jc["items"].push_back(std::move(ji));
            }
        }
        if (!c.children.empty()) jc["children"] = c.children;
        if (!c.manual_weights.empty()) jc["manual_weights"] = c.manual_weights;
        doc["constructs"].push_back(std::move(jc));
    }
    return doc.dump(2) + "\n";
}

// FNV-1a 64-bit over the canonical serialization; stable across runs
// and platforms, used to tie iteration records to the spec they ran
// against.
inline std::string spec_content_hash(const MeasurementSpec& spec) {
    const std::string text = serialize_spec(spec);
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    static const char* hex = "0123456789abcdef";
    for (int i = 15; i >= 0; --i) {
        buf[i] = hex[h & 0xf];
        h >>= 4;
    }
    buf[16] = '\0';
    return std::string("fnv1a64:") + buf;
}

}  // namespace formav
