#ifndef FSKYLINE_RELATION_HPP
#define FSKYLINE_RELATION_HPP

#include <cstddef>
#include <string>
#include <vector>

namespace fskyline {

/// Attribute kinds. Normalized attributes live in [0, 1]; rate attributes
/// store non-negative mean occurrence counts of some underlying process.
enum class AttributeKind { normalized, rate };

const char* to_string(AttributeKind kind);
AttributeKind attribute_kind_from_string(const std::string& text);

struct AttributeSchema {
    std::vector<std::string> names;
    std::vector<AttributeKind> kinds;

    std::size_t arity() const { return names.size(); }
};

/// Names unique and non-empty, kinds aligned 1:1, arity >= 1.
void validate_schema(const AttributeSchema& schema);

struct Tuple {
    std::string id;
    std::vector<double> values;  // one per schema attribute, in schema order
};

/// Ordered collection of tuples over a declared schema.
struct Relation {
    AttributeSchema schema;
    std::vector<Tuple> tuples;
};

/// Checks every value against its attribute's domain and rejects duplicate
/// or empty tuple ids. Throws DataError naming the offending id, attribute
/// and value.
void validate_relation(const Relation& relation);

/// True when a single value is inside the domain of its kind.
bool value_in_domain(AttributeKind kind, double value);

}  // namespace fskyline

#endif  // FSKYLINE_RELATION_HPP
