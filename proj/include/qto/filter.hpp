#pragma once

#include <qto/detail/text.hpp>
#include <qto/error.hpp>
#include <qto/geometry.hpp>
#include <qto/scene.hpp>

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qto {

enum class PredicateOp { Equals, Contains, Prefix };

inline const char* to_string(PredicateOp op) {
    switch (op) {
    case PredicateOp::Equals: return "equals";
    case PredicateOp::Contains: return "contains";
    case PredicateOp::Prefix: return "prefix";
    }
    return "equals";
}

struct Predicate {
    std::string key;
    PredicateOp op = PredicateOp::Equals;
    std::string value;

    friend bool operator==(const Predicate&, const Predicate&) = default;
};

/// Boolean AND/OR/NOT tree over property predicates.
class FilterExpr {
public:
    enum class Kind { Predicate, And, Or, Not };

    static FilterExpr pred(std::string key, PredicateOp op, std::string value) {
        if (key.empty()) {
            throw Error(ErrorCode::InvariantViolation, "predicate key must not be empty");
        }
        FilterExpr e(Kind::Predicate);
        e.pred_ = {std::move(key), op, std::move(value)};
        return e;
    }

    static FilterExpr all_of(std::vector<FilterExpr> children) { return branch(Kind::And, std::move(children)); }
    static FilterExpr any_of(std::vector<FilterExpr> children) { return branch(Kind::Or, std::move(children)); }

    static FilterExpr negate(FilterExpr child) {
        FilterExpr e(Kind::Not);
        e.children_.push_back(std::move(child));
        return e;
    }

    Kind kind() const { return kind_; }
    const Predicate& predicate() const { return pred_; }
    const std::vector<FilterExpr>& children() const { return children_; }

    friend bool operator==(const FilterExpr&, const FilterExpr&) = default;

private:
    explicit FilterExpr(Kind k) : kind_(k) {}

    static FilterExpr branch(Kind k, std::vector<FilterExpr> children) {
        if (children.empty()) {
            throw Error(ErrorCode::InvariantViolation, "and/or needs at least one child");
        }
        FilterExpr e(k);
        e.children_ = std::move(children);
        return e;
    }

    Kind kind_;
    Predicate pred_;
    std::vector<FilterExpr> children_;
};

using FilterCatalog = std::map<std::string, FilterExpr>;

/// Case-insensitive predicate test; a missing key never matches.
inline bool eval_predicate(const Predicate& p, const Element& element) {
    const auto raw = element.property(p.key);
    if (!raw) {
        return false;
    }
    const std::string have = detail::fold_case(*raw);
    const std::string want = detail::fold_case(p.value);
    switch (p.op) {
    case PredicateOp::Equals: return have == want;
    case PredicateOp::Contains: return have.find(want) != std::string::npos;
    case PredicateOp::Prefix: return have.starts_with(want);
    }
    return false;
}

inline bool eval_filter(const FilterExpr& expr, const Element& element) {
    switch (expr.kind()) {
    case FilterExpr::Kind::Predicate: return eval_predicate(expr.predicate(), element);
    case FilterExpr::Kind::And:
        return std::all_of(expr.children().begin(), expr.children().end(),
                           [&](const FilterExpr& c) { return eval_filter(c, element); });
    case FilterExpr::Kind::Or:
        return std::any_of(expr.children().begin(), expr.children().end(),
                           [&](const FilterExpr& c) { return eval_filter(c, element); });
    case FilterExpr::Kind::Not: return !eval_filter(expr.children().front(), element);
    }
    return false;
}

/// Ids of matching elements, in scene order.
inline std::vector<std::string> apply_filter(const Scene& scene, const FilterExpr& expr) {
    std::vector<std::string> ids;
    for (const Element& e : scene.elements) {
        if (eval_filter(expr, e)) {
            ids.push_back(e.id);
        }
    }
    return ids;
}

// ---------------------------------------------------------------------------
// Persistence: { "<name>": <expr> } with
//   <expr> = {"pred":{"key","op","value"}} | {"and":[...]} | {"or":[...]} | {"not":<expr>}

inline nlohmann::json filter_to_json(const FilterExpr& e) {
    using nlohmann::json;
    switch (e.kind()) {
    case FilterExpr::Kind::Predicate:
        return json{{"pred", {{"key", e.predicate().key}, {"op", to_string(e.predicate().op)}, {"value", e.predicate().value}}}};
    case FilterExpr::Kind::And:
    case FilterExpr::Kind::Or: {
        json arr = json::array();
        for (const auto& c : e.children()) {
            arr.push_back(filter_to_json(c));
        }
        return json{{e.kind() == FilterExpr::Kind::And ? "and" : "or", std::move(arr)}};
    }
    case FilterExpr::Kind::Not: return json{{"not", filter_to_json(e.children().front())}};
    }
    return {};
}

inline FilterExpr filter_from_json(const nlohmann::json& j, const std::string& path) {
    auto fail = [&](const std::string& msg) { return Error(ErrorCode::Syntax, path + ": " + msg); };
    if (!j.is_object() || j.size() != 1) {
        throw fail("expression must be an object with exactly one of pred/and/or/not");
    }
    const auto& [tag, body] = *j.items().begin();
    if (tag == "pred") {
        if (!body.is_object() || !body.contains("key") || !body.contains("op") || !body.contains("value") ||
            !body["key"].is_string() || !body["op"].is_string() || !body["value"].is_string()) {
            throw fail("pred needs string fields key, op, value");
        }
        const std::string op = body["op"].get<std::string>();
        PredicateOp pop{};
        if (op == "equals") {
            pop = PredicateOp::Equals;
        } else if (op == "contains") {
            pop = PredicateOp::Contains;
        } else if (op == "prefix") {
            pop = PredicateOp::Prefix;
        } else {
            throw fail("unknown predicate op '" + op + "'");
        }
        if (body["key"].get<std::string>().empty()) {
            throw fail("predicate key must not be empty");
        }
        return FilterExpr::pred(body["key"].get<std::string>(), pop, body["value"].get<std::string>());
    }
    if (tag == "and" || tag == "or") {
        if (!body.is_array() || body.empty()) {
            throw fail(tag + " needs a non-empty array");
        }
        std::vector<FilterExpr> kids;
        for (std::size_t i = 0; i < body.size(); ++i) {
            kids.push_back(filter_from_json(body[i], path + "." + tag + "[" + std::to_string(i) + "]"));
        }
        return tag == "and" ? FilterExpr::all_of(std::move(kids)) : FilterExpr::any_of(std::move(kids));
    }
    if (tag == "not") {
        return FilterExpr::negate(filter_from_json(body, path + ".not"));
    }
    throw fail("unknown expression tag '" + tag + "'");
}

inline std::string save_filters(const FilterCatalog& catalog) {
    nlohmann::json doc = nlohmann::json::object();
    for (const auto& [name, expr] : catalog) {
        doc[name] = filter_to_json(expr);
    }
    return doc.dump(2) + "\n";
}

namespace detail {

/// Parses JSON while rejecting duplicate keys in the top-level object.
inline nlohmann::json parse_json_unique_top_keys(std::string_view text) {
    std::set<std::string> names;
    std::string duplicate;
    auto cb = [&](int depth, nlohmann::json::parse_event_t ev, nlohmann::json& parsed) {
        if (ev == nlohmann::json::parse_event_t::key && depth == 1 && duplicate.empty()) {
            const auto name = parsed.get<std::string>();
            if (!names.insert(name).second) {
                duplicate = name;
            }
        }
        return true;
    };
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text, cb);
    } catch (const nlohmann::json::parse_error& e) {
        const auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
        throw Error(ErrorCode::Syntax, e.what(), line, col);
    }
    if (!duplicate.empty()) {
        throw Error(ErrorCode::DuplicateName, "duplicate filter name '" + duplicate + "'");
    }
    return doc;
}

} // namespace detail

inline FilterCatalog load_filters(std::string_view text) {
    const nlohmann::json doc = detail::parse_json_unique_top_keys(text);
    if (!doc.is_object()) {
        throw Error(ErrorCode::Syntax, "filter file must be a JSON object of name -> expression");
    }
    FilterCatalog catalog;
    for (const auto& [name, j] : doc.items()) {
        catalog.emplace(name, filter_from_json(j, name));
    }
    return catalog;
}

// ---------------------------------------------------------------------------
// Work areas

struct WorkArea {
    std::string name;
    Aabb region;
    int priority = 0;
};

inline constexpr std::string_view kUnassigned = "unassigned";

/// Maps each element id to the lowest-priority-number area whose half-open
/// region contains the element's AABB centroid, or "unassigned". Equal
/// priorities fall back to declaration order.
inline std::map<std::string, std::string> assign_work_area(const Scene& scene, const std::vector<WorkArea>& areas) {
    std::set<std::string> names;
    for (const WorkArea& a : areas) {
        if (!names.insert(a.name).second) {
            throw Error(ErrorCode::DuplicateName, "duplicate work area '" + a.name + "'");
        }
    }
    std::vector<const WorkArea*> ordered;
    for (const WorkArea& a : areas) {
        ordered.push_back(&a);
    }
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const WorkArea* a, const WorkArea* b) { return a->priority < b->priority; });

    std::map<std::string, std::string> out;
    for (const Element& e : scene.elements) {
        const Point3 c = e.aabb.centroid();
        std::string label(kUnassigned);
        for (const WorkArea* a : ordered) {
            if (a->region.contains_half_open(c)) {
                label = a->name;
                break;
            }
        }
        out.emplace(e.id, std::move(label));
    }
    return out;
}

inline std::vector<WorkArea> load_work_areas(std::string_view text) {
    const nlohmann::json doc = detail::parse_json(text);
    if (!doc.is_array()) {
        throw Error(ErrorCode::Syntax, "work-area file must be a JSON array");
    }
    std::vector<WorkArea> areas;
    std::set<std::string> names;
    for (const auto& j : doc) {
        if (!j.is_object() || !j.contains("name") || !j["name"].is_string() || !j.contains("min") ||
            !j.contains("max")) {
            throw Error(ErrorCode::MissingField, "work area needs name, min, max");
        }
        WorkArea a;
        a.name = j["name"].get<std::string>();
        if (!names.insert(a.name).second) {
            throw Error(ErrorCode::DuplicateName, "duplicate work area '" + a.name + "'");
        }
        if (j.contains("priority")) {
            if (!j["priority"].is_number_integer()) {
                throw Error(ErrorCode::Syntax, "work area '" + a.name + "': priority must be an integer");
            }
            a.priority = j["priority"].get<int>();
        }
        a.region = Aabb(detail::json_point(j["min"], a.name + ".min"), detail::json_point(j["max"], a.name + ".max"));
        areas.push_back(std::move(a));
    }
    return areas;
}

} // namespace qto
