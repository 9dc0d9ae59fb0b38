#include "fskyline/relation.hpp"

#include <cmath>
#include <unordered_set>

#include "fskyline/errors.hpp"

namespace fskyline {

const char* to_string(AttributeKind kind) {
    return kind == AttributeKind::normalized ? "normalized" : "rate";
}

AttributeKind attribute_kind_from_string(const std::string& text) {
    if (text == "normalized") {
        return AttributeKind::normalized;
    }
    if (text == "rate") {
        return AttributeKind::rate;
    }
    throw DataError("unknown attribute kind '" + text + "' (expected 'normalized' or 'rate')");
}

void validate_schema(const AttributeSchema& schema) {
    if (schema.names.empty()) {
        throw DataError("schema must declare at least one attribute");
    }
    if (schema.names.size() != schema.kinds.size()) {
        throw DataError("schema names and kinds must align 1:1");
    }
    std::unordered_set<std::string> seen;
    for (const auto& name : schema.names) {
        if (name.empty()) {
            throw DataError("schema attribute names must be non-empty");
        }
        if (!seen.insert(name).second) {
            throw DataError("duplicate attribute name '" + name + "' in schema");
        }
    }
}

bool value_in_domain(AttributeKind kind, double value) {
    if (!std::isfinite(value)) {
        return false;
    }
    if (kind == AttributeKind::normalized) {
        return value >= 0.0 && value <= 1.0;
    }
    return value >= 0.0;
}

void validate_relation(const Relation& relation) {
    validate_schema(relation.schema);
    const std::size_t arity = relation.schema.arity();
    std::unordered_set<std::string> ids;
    for (const auto& tuple : relation.tuples) {
        if (tuple.id.empty()) {
            throw DataError("tuple ids must be non-empty");
        }
        if (!ids.insert(tuple.id).second) {
            throw DataError("duplicate tuple id '" + tuple.id + "'");
        }
        if (tuple.values.size() != arity) {
            throw DataError("tuple '" + tuple.id + "' has " + std::to_string(tuple.values.size()) +
                            " values, schema arity is " + std::to_string(arity));
        }
        for (std::size_t i = 0; i < arity; ++i) {
            if (!value_in_domain(relation.schema.kinds[i], tuple.values[i])) {
                throw DataError("tuple '" + tuple.id + "': attribute '" +
                                relation.schema.names[i] + "' value " +
                                std::to_string(tuple.values[i]) + " outside its " +
                                to_string(relation.schema.kinds[i]) + " domain");
            }
        }
    }
}

}  // namespace fskyline
