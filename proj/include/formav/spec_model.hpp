#pragma once
// Measurement-model specification: constructs, items, hierarchy, and
// the decision guide for declaring a construct formative or reflective.

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "formav/errors.hpp"

namespace formav {

enum class SourceKind { definitional, mirror };
enum class ModelKind { formative, reflective };
enum class WeightSource { cvr, researcher_rating, manual };

struct ItemSpec {
    std::string item_id;
    std::string prompt;
    int scale_min = 1;
    int scale_max = 5;
    SourceKind source_kind = SourceKind::definitional;
    std::string citation;
    bool reverse_coded = false;  // remapped v -> scale_max + scale_min - v at ingestion

    bool operator==(const ItemSpec&) const = default;
};

// A construct carries either items (first order) or child construct
// ids (higher order), never both.
struct ConstructSpec {
    std::string construct_id;
    std::string name;
    ModelKind model = ModelKind::formative;
    std::vector<ItemSpec> items;
    std::vector<std::string> children;
    WeightSource weight_source = WeightSource::manual;
    std::vector<double> manual_weights;  // optional; aligned to items or children
    std::string parent;                  // materialized from the owning construct's children list

    bool is_higher_order() const { return !children.empty(); }

    // Indicator ids in declared order: item ids for first-order
    // constructs, child construct ids for higher-order ones.
    std::vector<std::string> indicator_ids() const {
        std::vector<std::string> out;
        if (is_higher_order()) {
            out = children;
        } else {
            out.reserve(items.size());
            for (const auto& it : items) out.push_back(it.item_id);
        }
        return out;
    }

    bool operator==(const ConstructSpec&) const = default;
};

struct MeasurementSpec {
    std::vector<ConstructSpec> constructs;  // declaration order preserved

    const ConstructSpec* find_construct(const std::string& id) const {
        for (const auto& c : constructs)
            if (c.construct_id == id) return &c;
        return nullptr;
    }

    const ItemSpec* find_item(const std::string& id) const {
        for (const auto& c : constructs)
            for (const auto& it : c.items)
                if (it.item_id == id) return &it;
        return nullptr;
    }

    // Leaf items across all constructs, declaration order.
    std::vector<const ItemSpec*> all_items() const {
        std::vector<const ItemSpec*> out;
        for (const auto& c : constructs)
            for (const auto& it : c.items) out.push_back(&it);
        return out;
    }

    // Scale bounds for a column id: the item's own bounds, or for a
    // construct id the envelope of its descendant leaf items (composite
    // scores are convex combinations, so they stay inside it).
    std::pair<double, double> column_bounds(const std::string& id) const {
        if (const ItemSpec* it = find_item(id))
            return {static_cast<double>(it->scale_min), static_cast<double>(it->scale_max)};
        const ConstructSpec* c = find_construct(id);
        if (!c) throw ReferenceError("unknown item or construct id: " + id);
        double lo = 0.0, hi = 0.0;
        bool first = true;
        for (const auto& leaf : leaf_items_of(*c)) {
            if (first) {
                lo = leaf->scale_min;
                hi = leaf->scale_max;
                first = false;
            } else {
                lo = std::min(lo, static_cast<double>(leaf->scale_min));
                hi = std::max(hi, static_cast<double>(leaf->scale_max));
            }
        }
        if (first) throw ReferenceError("construct has no leaf items: " + id);
        return {lo, hi};
    }

    std::vector<const ItemSpec*> leaf_items_of(const ConstructSpec& c) const {
        std::vector<const ItemSpec*> out;
        collect_leaves(c, out, 0);
        return out;
    }

    bool operator==(const MeasurementSpec&) const = default;

  private:
    void collect_leaves(const ConstructSpec& c, std::vector<const ItemSpec*>& out, int depth) const {
        if (depth > static_cast<int>(constructs.size())) return;  // cycle guard
        for (const auto& it : c.items) out.push_back(&it);
        for (const auto& child_id : c.children)
            if (const ConstructSpec* child = find_construct(child_id))
                collect_leaves(*child, out, depth + 1);
    }
};

enum class Severity { warning, error };

struct SpecFinding {
    Severity severity = Severity::warning;
    std::string code;
    std::string message;
    std::string construct_id;  // empty when not construct-scoped
    std::string item_id;       // empty when not item-scoped

    bool operator==(const SpecFinding&) const = default;
};

namespace finding_code {
inline constexpr const char* duplicate_construct = "DUPLICATE_CONSTRUCT";
inline constexpr const char* duplicate_item = "DUPLICATE_ITEM";
inline constexpr const char* scale_bounds = "SCALE_BOUNDS";
inline constexpr const char* items_and_children = "ITEMS_AND_CHILDREN";
inline constexpr const char* no_indicators = "NO_INDICATORS";
inline constexpr const char* manual_weights_bad = "MANUAL_WEIGHTS_BAD";
inline constexpr const char* manual_weights_missing = "MANUAL_WEIGHTS_MISSING";
inline constexpr const char* unknown_child = "UNKNOWN_CHILD";
inline constexpr const char* multiple_parents = "MULTIPLE_PARENTS";
inline constexpr const char* hierarchy_cycle = "HIERARCHY_CYCLE";
inline constexpr const char* item_floor = "ITEM_FLOOR";
inline constexpr const char* single_source = "SINGLE_SOURCE";
inline constexpr const char* missing_citation = "MISSING_CITATION";
inline constexpr const char* item_never_administered = "ITEM_NEVER_ADMINISTERED";
}  // namespace finding_code

// Structural validation. ERROR findings are invariant violations;
// WARNING findings are review prompts (item floor, source breadth,
// missing citations). Never mutates the spec.
inline std::vector<SpecFinding> validate_spec(const MeasurementSpec& spec, int item_floor = 5) {
    std::vector<SpecFinding> out;
    auto err = [&](const char* code, std::string msg, std::string cid = "", std::string iid = "") {
        out.push_back({Severity::error, code, std::move(msg), std::move(cid), std::move(iid)});
    };
    auto warn = [&](const char* code, std::string msg, std::string cid = "", std::string iid = "") {
        out.push_back({Severity::warning, code, std::move(msg), std::move(cid), std::move(iid)});
    };

    std::set<std::string> construct_ids;
    std::set<std::string> item_ids;
    for (const auto& c : spec.constructs) {
        if (!construct_ids.insert(c.construct_id).second)
            err(finding_code::duplicate_construct, "duplicate construct_id '" + c.construct_id + "'",
                c.construct_id);
        for (const auto& it : c.items) {
            if (!item_ids.insert(it.item_id).second)
                err(finding_code::duplicate_item, "duplicate item_id '" + it.item_id + "'",
                    c.construct_id, it.item_id);
            if (it.scale_min >= it.scale_max)
                err(finding_code::scale_bounds,
                    "item '" + it.item_id + "' has scale_min >= scale_max", c.construct_id,
                    it.item_id);
        }
    }

    // One parent per child, resolvable references.
    std::map<std::string, std::string> parent_of;
    for (const auto& c : spec.constructs) {
        if (!c.items.empty() && !c.children.empty())
            err(finding_code::items_and_children,
                "construct '" + c.construct_id + "' lists both items and child constructs",
                c.construct_id);
        if (c.items.empty() && c.children.empty())
            err(finding_code::no_indicators, "construct '" + c.construct_id + "' has no indicators",
                c.construct_id);
        for (const auto& child : c.children) {
            if (!spec.find_construct(child)) {
                err(finding_code::unknown_child,
                    "construct '" + c.construct_id + "' references unknown child '" + child + "'",
                    c.construct_id);
                continue;
            }
            auto [pos, inserted] = parent_of.emplace(child, c.construct_id);
            if (!inserted)
                err(finding_code::multiple_parents,
                    "construct '" + child + "' is claimed by both '" + pos->second + "' and '" +
                        c.construct_id + "'",
                    child);
        }
    }

    // Cycle detection over the children graph (iterative DFS, colors).
    std::map<std::string, int> color;  // 0 unvisited, 1 in progress, 2 done
    bool cycle_reported = false;
    auto dfs = [&](const ConstructSpec& root) {
        std::vector<std::pair<const ConstructSpec*, std::size_t>> stack{{&root, 0}};
        color[root.construct_id] = 1;
        while (!stack.empty()) {
            auto& [c, idx] = stack.back();
            if (idx >= c->children.size()) {
                color[c->construct_id] = 2;
                stack.pop_back();
                continue;
            }
            const ConstructSpec* child = spec.find_construct(c->children[idx++]);
            if (!child) continue;
            const int col = color[child->construct_id];
            if (col == 1) {
                if (!cycle_reported)
                    err(finding_code::hierarchy_cycle,
                        "hierarchy cycle involving construct '" + child->construct_id + "'",
                        child->construct_id);
                cycle_reported = true;
            } else if (col == 0) {
                color[child->construct_id] = 1;
                stack.push_back({child, 0});
            }
        }
    };
    for (const auto& c : spec.constructs)
        if (color[c.construct_id] == 0) dfs(c);

    for (const auto& c : spec.constructs) {
        const std::size_t n_ind = c.is_higher_order() ? c.children.size() : c.items.size();
        if (!c.manual_weights.empty()) {
            const bool len_ok = c.manual_weights.size() == n_ind;
            const bool nonneg = std::all_of(c.manual_weights.begin(), c.manual_weights.end(),
                                            [](double w) { return w >= 0.0; });
            const bool any_pos = std::any_of(c.manual_weights.begin(), c.manual_weights.end(),
                                             [](double w) { return w > 0.0; });
            if (!len_ok || !nonneg || !any_pos)
                err(finding_code::manual_weights_bad,
                    "construct '" + c.construct_id +
                        "' manual_weights must match indicator count, be non-negative, and not all zero",
                    c.construct_id);
        } else if (c.weight_source == WeightSource::manual) {
            err(finding_code::manual_weights_missing,
                "construct '" + c.construct_id + "' declares manual weights but provides none",
                c.construct_id);
        }

        if (n_ind > 0 && n_ind < static_cast<std::size_t>(item_floor))
            warn(finding_code::item_floor,
                 "construct '" + c.construct_id + "' has " + std::to_string(n_ind) +
                     " indicators, below the floor of " + std::to_string(item_floor),
                 c.construct_id);

        if (c.model == ModelKind::formative && c.items.size() > 1) {
            bool all_same = true;
            for (const auto& it : c.items) {
                if (it.citation.empty() || it.citation != c.items.front().citation) {
                    all_same = false;
                    break;
                }
            }
            if (all_same)
                warn(finding_code::single_source,
                     "formative construct '" + c.construct_id +
                         "' draws every item from a single source; scope coverage may be narrow",
                     c.construct_id);
        }
        for (const auto& it : c.items)
            if (it.citation.empty())
                warn(finding_code::missing_citation, "item '" + it.item_id + "' has no citation",
                     c.construct_id, it.item_id);
    }
    return out;
}

inline bool has_errors(const std::vector<SpecFinding>& findings) {
    return std::any_of(findings.begin(), findings.end(),
                       [](const SpecFinding& f) { return f.severity == Severity::error; });
}

// --- construct classification guide ---------------------------------------

enum class Causality { construct_causes_items, items_cause_construct, ambiguous };
enum class Answer { yes, no, unsure };

struct ClassificationAnswers {
    Causality causality = Causality::ambiguous;
    Answer items_interchangeable = Answer::unsure;
    Answer covariation_necessary = Answer::unsure;
};

enum class Recommendation { formative, reflective, follow_definition };

// Deterministic cascade: causality first, then interchangeability,
// then necessity of covariation. When all three are inconclusive the
// construct's literature definition decides.
inline Recommendation classify_construct(const ClassificationAnswers& a) {
    if (a.causality == Causality::items_cause_construct) return Recommendation::formative;
    if (a.causality == Causality::construct_causes_items) return Recommendation::reflective;
    if (a.items_interchangeable == Answer::no) return Recommendation::formative;
    if (a.items_interchangeable == Answer::yes) return Recommendation::reflective;
    if (a.covariation_necessary == Answer::yes) return Recommendation::reflective;
    if (a.covariation_necessary == Answer::no) return Recommendation::formative;
    return Recommendation::follow_definition;
}

}  // namespace formav
