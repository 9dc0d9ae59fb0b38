#include "fskyline/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <random>
#include <unordered_map>
#include <unordered_set>

#include <CLI11.hpp>
#include <json.hpp>

#include "fskyline/errors.hpp"
#include "fskyline/oracle.hpp"

namespace fskyline::io {

using nlohmann::json;

namespace {

std::string trimmed(std::string cell) {
    const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
    while (!cell.empty() && is_space(cell.back())) {
        cell.pop_back();
    }
    std::size_t start = 0;
    while (start < cell.size() && is_space(cell[start])) {
        ++start;
    }
    return cell.substr(start);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> cells;
    std::string current;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(trimmed(current));
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    cells.push_back(trimmed(current));
    return cells;
}

double parse_number(const std::string& cell, std::size_t row, const std::string& column) {
    double value = 0.0;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end || cell.empty()) {
        throw DataError("row " + std::to_string(row) + ": cell '" + cell + "' in column '" +
                        column + "' is not a decimal number");
    }
    return value;
}

void expect_keys(const json& obj, const std::string& where,
                 std::initializer_list<const char*> allowed) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* key : allowed) {
            if (item.key() == key) {
                known = true;
                break;
            }
        }
        if (!known) {
            throw DataError("unknown key '" + item.key() + "' in " + where);
        }
    }
}

const json& require_key(const json& obj, const std::string& where, const char* key) {
    if (!obj.contains(key)) {
        throw DataError(where + " is missing required key '" + std::string(key) + "'");
    }
    return obj.at(key);
}

double as_number(const json& value, const std::string& where) {
    if (!value.is_number()) {
        throw DataError(where + " must be a number");
    }
    return value.get<double>();
}

std::string as_string(const json& value, const std::string& where) {
    if (!value.is_string()) {
        throw DataError(where + " must be a string");
    }
    return value.get<std::string>();
}

// [0, 1) with the engine output mapped explicitly, so files are identical
// across standard libraries.
double unit_uniform(std::mt19937_64& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

std::string format_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json timing_json(const PhaseTimings& t) {
    return json{{"score", t.score}, {"sky", t.sky}, {"nd", t.nd}, {"po", t.po}};
}

}  // namespace

ScoringFamily QuerySpec::to_family() const {
    ScoringFamily family{schema, transforms, WeightPolytope(schema.arity(), constraints)};
    validate_family(family);
    return family;
}

Relation load_relation(const std::string& path, const AttributeSchema& schema) {
    validate_schema(schema);
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open relation file '" + path + "'");
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw DataError("relation file '" + path + "' is empty");
    }
    const std::vector<std::string> header = split_csv(line);
    if (header.empty() || header[0] != "id") {
        throw DataError("relation header must start with an 'id' column");
    }
    // Column lookup per schema attribute; header order may differ.
    std::vector<std::size_t> column_of(schema.arity());
    {
        std::unordered_map<std::string, std::size_t> by_name;
        for (std::size_t c = 1; c < header.size(); ++c) {
            if (!by_name.emplace(header[c], c).second) {
                throw DataError("duplicate column '" + header[c] + "' in relation header");
            }
        }
        if (by_name.size() != schema.arity()) {
            throw DataError("relation has " + std::to_string(by_name.size()) +
                            " attribute columns, schema declares " +
                            std::to_string(schema.arity()));
        }
        for (std::size_t i = 0; i < schema.arity(); ++i) {
            const auto it = by_name.find(schema.names[i]);
            if (it == by_name.end()) {
                throw DataError("relation is missing schema attribute '" + schema.names[i] + "'");
            }
            column_of[i] = it->second;
        }
    }

    Relation relation;
    relation.schema = schema;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (trimmed(line).empty()) {
            continue;
        }
        const std::vector<std::string> cells = split_csv(line);
        if (cells.size() != header.size()) {
            throw DataError("row " + std::to_string(row) + ": expected " +
                            std::to_string(header.size()) + " cells, found " +
                            std::to_string(cells.size()));
        }
        Tuple tuple;
        tuple.id = cells[0];
        if (tuple.id.empty()) {
            throw DataError("row " + std::to_string(row) + ": empty id");
        }
        tuple.values.resize(schema.arity());
        for (std::size_t i = 0; i < schema.arity(); ++i) {
            tuple.values[i] = parse_number(cells[column_of[i]], row, schema.names[i]);
        }
        relation.tuples.push_back(std::move(tuple));
    }
    validate_relation(relation);
    return relation;
}

QuerySpec parse_query(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open query spec '" + path + "'");
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw DataError("query spec '" + path + "': " + e.what());
    }
    if (!doc.is_object()) {
        throw DataError("query spec root must be an object");
    }
    expect_keys(doc, "query spec", {"schema", "transforms", "constraints", "outputs", "engine"});

    QuerySpec spec;

    const json& schema_node = require_key(doc, "query spec", "schema");
    if (!schema_node.is_array() || schema_node.empty()) {
        throw DataError("'schema' must be a non-empty array");
    }
    for (const auto& item : schema_node) {
        if (!item.is_object()) {
            throw DataError("schema entries must be objects");
        }
        expect_keys(item, "schema entry", {"name", "kind"});
        spec.schema.names.push_back(as_string(require_key(item, "schema entry", "name"),
                                              "schema entry 'name'"));
        spec.schema.kinds.push_back(attribute_kind_from_string(
            as_string(require_key(item, "schema entry", "kind"), "schema entry 'kind'")));
    }
    validate_schema(spec.schema);

    const json& transforms_node = require_key(doc, "query spec", "transforms");
    if (!transforms_node.is_array()) {
        throw DataError("'transforms' must be an array");
    }
    if (transforms_node.size() != spec.schema.arity()) {
        throw DataError("'transforms' declares " + std::to_string(transforms_node.size()) +
                        " entries for " + std::to_string(spec.schema.arity()) + " attributes");
    }
    spec.transforms.resize(spec.schema.arity());
    std::vector<char> transform_seen(spec.schema.arity(), 0);
    for (const auto& item : transforms_node) {
        if (!item.is_object()) {
            throw DataError("transform entries must be objects");
        }
        expect_keys(item, "transform entry", {"attribute", "kind", "k", "p"});
        const std::string attr =
            as_string(require_key(item, "transform entry", "attribute"), "'attribute'");
        const auto name_it =
            std::find(spec.schema.names.begin(), spec.schema.names.end(), attr);
        if (name_it == spec.schema.names.end()) {
            throw DataError("transform references unknown attribute '" + attr + "'");
        }
        const std::size_t idx =
            static_cast<std::size_t>(name_it - spec.schema.names.begin());
        if (transform_seen[idx]) {
            throw DataError("attribute '" + attr + "' has more than one transform");
        }
        transform_seen[idx] = 1;

        const TransformKind kind = transform_kind_from_string(
            as_string(require_key(item, "transform entry", "kind"), "'kind'"));
        const bool wants_k = requires_rate_attribute(kind);
        const bool wants_p = kind == TransformKind::power;
        if (item.contains("k") && !wants_k) {
            throw DataError("transform '" + std::string(to_string(kind)) +
                            "' on attribute '" + attr + "' does not take 'k'");
        }
        if (item.contains("p") && !wants_p) {
            throw DataError("transform '" + std::string(to_string(kind)) +
                            "' on attribute '" + attr + "' does not take 'p'");
        }
        Transform tr;
        switch (kind) {
            case TransformKind::identity:
                tr = Transform::identity();
                break;
            case TransformKind::complement:
                tr = Transform::complement();
                break;
            case TransformKind::power:
                tr = Transform::power(
                    as_number(require_key(item, "power transform", "p"), "'p'"));
                break;
            case TransformKind::poisson_cdf:
                tr = Transform::poisson_cdf(
                    as_number(require_key(item, "poisson_cdf transform", "k"), "'k'"));
                break;
            case TransformKind::poisson_survival:
                tr = Transform::poisson_survival(
                    as_number(require_key(item, "poisson_survival transform", "k"), "'k'"));
                break;
            case TransformKind::peak:
                tr = Transform::peak(
                    as_number(require_key(item, "peak transform", "k"), "'k'"));
                break;
        }
        spec.transforms[idx] = tr;
    }

    if (doc.contains("constraints")) {
        const json& rows = doc.at("constraints");
        if (!rows.is_array()) {
            throw DataError("'constraints' must be an array");
        }
        for (const auto& item : rows) {
            if (!item.is_object()) {
                throw DataError("constraint entries must be objects");
            }
            expect_keys(item, "constraint entry", {"coeffs", "sense", "bound"});
            LinearConstraint row;
            const json& coeffs = require_key(item, "constraint entry", "coeffs");
            if (!coeffs.is_array() || coeffs.size() != spec.schema.arity()) {
                throw DataError("constraint 'coeffs' must list one coefficient per attribute");
            }
            for (const auto& c : coeffs) {
                row.coeffs.push_back(as_number(c, "constraint coefficient"));
            }
            row.sense = constraint_sense_from_string(
                as_string(require_key(item, "constraint entry", "sense"), "'sense'"));
            row.bound = as_number(require_key(item, "constraint entry", "bound"), "'bound'");
            spec.constraints.push_back(std::move(row));
        }
    }

    if (doc.contains("outputs")) {
        const json& outputs = doc.at("outputs");
        if (!outputs.is_array()) {
            throw DataError("'outputs' must be an array");
        }
        for (const auto& item : outputs) {
            const std::string name = as_string(item, "output entry");
            if (name == "sky") {
                spec.outputs.sky = true;
            } else if (name == "nd") {
                spec.outputs.nd = true;
            } else if (name == "po") {
                spec.outputs.po = true;
            } else {
                throw DataError("unknown output '" + name + "' (expected sky, nd or po)");
            }
        }
    }

    if (doc.contains("engine")) {
        const json& engine = doc.at("engine");
        if (!engine.is_object()) {
            throw DataError("'engine' must be an object");
        }
        expect_keys(engine, "engine section",
                    {"clamp", "tolerance", "oracle", "band_multiplier", "parallelism"});
        if (engine.contains("clamp")) {
            if (!engine.at("clamp").is_boolean()) {
                throw DataError("engine 'clamp' must be a boolean");
            }
            spec.engine.use_clamp = engine.at("clamp").get<bool>();
        }
        if (engine.contains("tolerance")) {
            const double tol = as_number(engine.at("tolerance"), "engine 'tolerance'");
            if (!(tol > 0.0)) {
                throw DataError("engine 'tolerance' must be > 0");
            }
            spec.engine.tolerance = tol;
        }
        if (engine.contains("oracle")) {
            if (!engine.at("oracle").is_boolean()) {
                throw DataError("engine 'oracle' must be a boolean");
            }
            spec.oracle_check = engine.at("oracle").get<bool>();
        }
        if (engine.contains("band_multiplier")) {
            const double m = as_number(engine.at("band_multiplier"), "'band_multiplier'");
            if (!(m > 0.0)) {
                throw DataError("engine 'band_multiplier' must be > 0");
            }
            spec.engine.numerics.band_multiplier = m;
        }
        if (engine.contains("parallelism")) {
            if (!engine.at("parallelism").is_number_unsigned() ||
                engine.at("parallelism").get<std::uint64_t>() == 0) {
                throw DataError("engine 'parallelism' must be a positive integer");
            }
            spec.engine.parallelism =
                static_cast<unsigned>(engine.at("parallelism").get<std::uint64_t>());
        }
    }
    return spec;
}

Relation gen_dataset(const GenOptions& options) {
    if (options.n == 0) {
        throw DataError("gen requires n >= 1");
    }
    validate_schema(options.schema);
    if (!(options.lambda_min >= 0.0) || !(options.lambda_max >= options.lambda_min) ||
        !std::isfinite(options.lambda_max)) {
        throw DataError("gen requires 0 <= lambda_min <= lambda_max < inf");
    }
    std::mt19937_64 eng(options.seed);
    const std::size_t width = std::to_string(options.n).size();

    Relation relation;
    relation.schema = options.schema;
    relation.tuples.reserve(options.n);
    for (std::size_t i = 0; i < options.n; ++i) {
        Tuple tuple;
        std::string index = std::to_string(i + 1);
        tuple.id = "t" + std::string(width - index.size(), '0') + index;
        tuple.values.reserve(options.schema.arity());
        for (AttributeKind kind : options.schema.kinds) {
            const double u = unit_uniform(eng);
            tuple.values.push_back(kind == AttributeKind::rate
                                       ? options.lambda_min +
                                             u * (options.lambda_max - options.lambda_min)
                                       : u);
        }
        relation.tuples.push_back(std::move(tuple));
    }
    return relation;
}

void write_relation(const Relation& relation, const std::string& path) {
    validate_relation(relation);
    std::string body = "id";
    for (const auto& name : relation.schema.names) {
        body += ',';
        body += name;
    }
    body += '\n';
    for (const auto& tuple : relation.tuples) {
        body += tuple.id;
        for (double v : tuple.values) {
            body += ',';
            body += format_value(v);
        }
        body += '\n';
    }
    std::ofstream out(path, std::ios::trunc);
    if (!out || !(out << body) || !out.flush()) {
        throw DataError("cannot write relation file '" + path + "'");
    }
}

std::string result_document(const QueryResult& result, bool include_timing) {
    json doc;
    doc["config"] = json{{"tolerance", result.config.tolerance},
                         {"clamp", result.clamp_used},
                         {"band_multiplier", result.config.numerics.band_multiplier},
                         {"parallelism", result.config.parallelism}};

    auto ids_or_null = [](const std::optional<std::vector<std::string>>& set) {
        return set ? json(*set) : json(nullptr);
    };
    doc["sets"] = json{{"sky", ids_or_null(result.sky)},
                       {"nd", ids_or_null(result.nd)},
                       {"po", ids_or_null(result.po)}};

    json witnesses;
    witnesses["sky"] = result.sky ? json(result.sky_witness) : json(nullptr);
    witnesses["nd"] = result.nd ? json(result.nd_witness) : json(nullptr);
    if (result.po) {
        json po_witness = json::object();
        for (const auto& [id, w] : result.po_witness) {
            po_witness[id] = json{{"ids", w.ids}, {"lambdas", w.lambdas}};
        }
        witnesses["po"] = po_witness;
    } else {
        witnesses["po"] = nullptr;
    }
    doc["witnesses"] = witnesses;
    doc["timing_ms"] = include_timing ? timing_json(result.timing_ms) : json(nullptr);
    return doc.dump(2) + "\n";
}

BenchReport run_bench(const BenchOptions& options) {
    if (options.d < 2) {
        throw DataError("bench requires d >= 2 (one rate attribute plus at least one more)");
    }
    BenchReport report;
    report.options = options;

    AttributeSchema schema;
    schema.names.push_back("rate");
    schema.kinds.push_back(AttributeKind::rate);
    for (std::size_t i = 1; i < options.d; ++i) {
        schema.names.push_back("x" + std::to_string(i));
        schema.kinds.push_back(AttributeKind::normalized);
    }
    const Relation relation = gen_dataset(
        GenOptions{options.n, schema, options.seed, options.lambda_min, options.lambda_max});

    std::vector<Transform> transforms;
    transforms.push_back(Transform::poisson_survival(options.k));
    for (std::size_t i = 1; i < options.d; ++i) {
        transforms.push_back(Transform::identity());
    }
    const ScoringFamily family{schema, transforms, WeightPolytope(options.d, {})};

    EngineConfig exact_cfg;
    exact_cfg.tolerance = options.tolerance;
    EngineConfig clamp_cfg = exact_cfg;
    clamp_cfg.use_clamp = true;

    const WantSets want{false, true, options.include_po};
    const QueryResult exact = run_query(relation, family, exact_cfg, want);
    const QueryResult clamp = run_query(relation, family, clamp_cfg, want);
    report.timing_exact = exact.timing_ms;
    report.timing_clamp = clamp.timing_ms;
    report.nd_size_exact = exact.nd->size();
    report.nd_size_clamp = clamp.nd->size();
    if (options.include_po) {
        report.po_size_exact = exact.po->size();
        report.po_size_clamp = clamp.po->size();
    }
    std::set_symmetric_difference(exact.nd->begin(), exact.nd->end(), clamp.nd->begin(),
                                  clamp.nd->end(),
                                  std::back_inserter(report.nd_symmetric_difference));

    // Clamp error over the Poisson column.
    const auto g_exact =
        transformed_values(relation, family, exact_cfg.effective_numerics(), 1);
    const auto g_clamp =
        transformed_values(relation, family, clamp_cfg.effective_numerics(), 1);
    const std::size_t d = options.d;
    double err_sum = 0.0;
    for (std::size_t t = 0; t < options.n; ++t) {
        const double err = std::fabs(g_clamp[t * d] - g_exact[t * d]);
        report.clamp_error_max = std::max(report.clamp_error_max, err);
        err_sum += err;
    }
    report.clamp_error_mean = err_sum / static_cast<double>(options.n);

    // Sub-instance whose pairwise vertex gaps all exceed the clamp error
    // bound: with every comparison outside the perturbable band, the exact
    // and clamped ND sets must coincide.
    report.margin_threshold = 2.0 * report.clamp_error_max + 2.0 * options.tolerance;
    const ScoreMatrix scores =
        score_matrix(relation, family, exact_cfg.effective_numerics(), 1);
    const std::size_t v_count = scores.vertex_count();
    std::vector<std::size_t> kept;
    for (std::size_t t = 0; t < options.n; ++t) {
        bool separated = true;
        for (std::size_t s : kept) {
            for (std::size_t v = 0; v < v_count; ++v) {
                if (std::fabs(scores.at(t, v) - scores.at(s, v)) <= report.margin_threshold) {
                    separated = false;
                    break;
                }
            }
            if (!separated) {
                break;
            }
        }
        if (separated) {
            kept.push_back(t);
        }
    }
    Relation filtered;
    filtered.schema = schema;
    for (std::size_t t : kept) {
        filtered.tuples.push_back(relation.tuples[t]);
    }
    report.filtered_size = filtered.tuples.size();
    if (!filtered.tuples.empty()) {
        const SetWithWitnesses nd_exact = nd(filtered, family, exact_cfg);
        const SetWithWitnesses nd_clamp = nd(filtered, family, clamp_cfg);
        std::vector<std::string> diff;
        std::set_symmetric_difference(nd_exact.members.begin(), nd_exact.members.end(),
                                      nd_clamp.members.begin(), nd_clamp.members.end(),
                                      std::back_inserter(diff));
        report.filtered_nd_symmetric_difference = diff.size();
    }
    return report;
}

std::string bench_document(const BenchReport& report, bool include_timing) {
    json doc;
    doc["options"] = json{{"n", report.options.n},
                          {"d", report.options.d},
                          {"seed", report.options.seed},
                          {"k", report.options.k},
                          {"lambda_min", report.options.lambda_min},
                          {"lambda_max", report.options.lambda_max},
                          {"po", report.options.include_po},
                          {"tolerance", report.options.tolerance}};
    doc["nd"] = json{{"size_exact", report.nd_size_exact},
                     {"size_clamp", report.nd_size_clamp},
                     {"symmetric_difference_count", report.nd_symmetric_difference.size()},
                     {"symmetric_difference", report.nd_symmetric_difference}};
    doc["po"] = report.options.include_po
                    ? json{{"size_exact", report.po_size_exact},
                           {"size_clamp", report.po_size_clamp}}
                    : json(nullptr);
    doc["clamp_error"] =
        json{{"max", report.clamp_error_max}, {"mean", report.clamp_error_mean}};
    doc["filtered"] =
        json{{"margin_threshold", report.margin_threshold},
             {"size", report.filtered_size},
             {"nd_symmetric_difference_count", report.filtered_nd_symmetric_difference}};
    doc["timing_ms"] = include_timing ? json{{"exact", timing_json(report.timing_exact)},
                                             {"clamp", timing_json(report.timing_clamp)}}
                                      : json(nullptr);
    return doc.dump(2) + "\n";
}

namespace {

struct QueryCommand {
    CLI::App* cmd = nullptr;
    std::string relation_path;
    std::string query_path;
    bool timing = false;
    bool oracle = false;
};

int query_command(const QueryCommand& qc, const std::string& which, std::ostream& out,
                  std::ostream& err) {
    const QuerySpec spec = parse_query(qc.query_path);
    const Relation relation = load_relation(qc.relation_path, spec.schema);
    const ScoringFamily family = spec.to_family();

    WantSets want = spec.outputs;
    if (which == "sky") {
        want.sky = true;
    } else if (which == "nd") {
        want.nd = true;
    } else {
        want.po = true;
    }

    const QueryResult result = run_query(relation, family, spec.engine, want);

    if (qc.oracle || spec.oracle_check) {
        std::string mismatch;
        if (want.sky) {
            const auto ref = oracle::sky_naive(relation, family, spec.engine);
            if (!result.sky || *result.sky != ref) {
                mismatch = "sky differs from sky_naive";
            }
        }
        if (mismatch.empty() && want.nd) {
            const auto ref = oracle::nd_brute(relation, family, spec.engine);
            if (!result.nd || *result.nd != ref) {
                mismatch = "nd differs from nd_brute";
            }
        }
        if (mismatch.empty() && want.po) {
            const auto cert = oracle::po_grid(relation, family, {}, spec.engine);
            for (const auto& id : cert.certified_po) {
                if (!std::binary_search(result.po->begin(), result.po->end(), id)) {
                    mismatch = "po misses grid-certified member '" + id + "'";
                    break;
                }
            }
            if (mismatch.empty()) {
                for (const auto& id : cert.certified_not_po) {
                    if (std::binary_search(result.po->begin(), result.po->end(), id)) {
                        mismatch = "po contains grid-refuted member '" + id + "'";
                        break;
                    }
                }
            }
        }
        if (!mismatch.empty()) {
            err << "oracle mismatch: " << mismatch << "\n";
            return exit_oracle_mismatch;
        }
    }

    out << result_document(result, qc.timing);
    return exit_ok;
}

AttributeSchema schema_from_attrs(const std::string& attrs) {
    AttributeSchema schema;
    std::string item;
    std::for_each(attrs.begin(), attrs.end(), [&](char c) {
        if (c == ',') {
            item = trimmed(item);
            const auto colon = item.find(':');
            if (colon == std::string::npos) {
                throw DataError("--attrs entries must look like name:kind");
            }
            schema.names.push_back(item.substr(0, colon));
            schema.kinds.push_back(attribute_kind_from_string(item.substr(colon + 1)));
            item.clear();
        } else {
            item.push_back(c);
        }
    });
    if (!trimmed(item).empty()) {
        item = trimmed(item);
        const auto colon = item.find(':');
        if (colon == std::string::npos) {
            throw DataError("--attrs entries must look like name:kind");
        }
        schema.names.push_back(item.substr(0, colon));
        schema.kinds.push_back(attribute_kind_from_string(item.substr(colon + 1)));
    }
    return schema;
}

AttributeSchema default_gen_schema(std::size_t d, std::size_t rates) {
    if (d == 0 || rates > d) {
        throw DataError("gen requires d >= 1 and rates <= d");
    }
    AttributeSchema schema;
    for (std::size_t i = 0; i < rates; ++i) {
        schema.names.push_back("r" + std::to_string(i + 1));
        schema.kinds.push_back(AttributeKind::rate);
    }
    for (std::size_t i = 0; i < d - rates; ++i) {
        schema.names.push_back("a" + std::to_string(i + 1));
        schema.kinds.push_back(AttributeKind::normalized);
    }
    return schema;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"flexible skyline query engine with Poisson-CDF scoring terms", "fskyline"};
    app.require_subcommand(1);

    std::unordered_map<std::string, QueryCommand> queries;
    for (const auto& [name, blurb] :
         std::initializer_list<std::pair<const char*, const char*>>{
             {"sky", "classic skyline of the relation"},
             {"nd", "non-dominated flexible skyline"},
             {"po", "potentially optimal flexible skyline"}}) {
        QueryCommand& qc = queries[name];
        qc.cmd = app.add_subcommand(name, blurb);
        qc.cmd->add_option("--relation", qc.relation_path, "CSV relation file")->required();
        qc.cmd->add_option("--query", qc.query_path, "JSON query spec")->required();
        qc.cmd->add_flag("--timing", qc.timing,
                         "include wall-clock timings (output no longer reproducible)");
        qc.cmd->add_flag("--oracle", qc.oracle,
                         "cross-check against the brute-force oracle; exit 4 on mismatch");
    }

    double cdf_lambda = 0.0;
    double cdf_k = 0.0;
    double cdf_p = 0.0;
    std::string cdf_mode = "cdf";
    CLI::App* cdf_cmd = app.add_subcommand("cdf", "evaluate Poisson terms directly");
    cdf_cmd->add_option("--lambda", cdf_lambda, "mean rate")
        ->required()
        ->check(CLI::NonNegativeNumber);
    CLI::Option* cdf_k_opt =
        cdf_cmd->add_option("--k", cdf_k, "count threshold")->check(CLI::NonNegativeNumber);
    CLI::Option* cdf_p_opt =
        cdf_cmd->add_option("--p", cdf_p, "probability (quantile mode)")
            ->check(CLI::Range(0.0, 1.0));
    cdf_cmd->add_option("--mode", cdf_mode, "cdf | survival | pmf | quantile")
        ->check(CLI::IsMember({"cdf", "survival", "pmf", "quantile"}));

    std::size_t gen_n = 0;
    std::uint64_t gen_seed = 0;
    std::string gen_out;
    std::size_t gen_d = 3;
    std::size_t gen_rates = 1;
    std::string gen_attrs;
    double gen_lambda_min = 1.0;
    double gen_lambda_max = 50.0;
    CLI::App* gen_cmd = app.add_subcommand("gen", "write a synthetic relation");
    gen_cmd->add_option("--n", gen_n, "tuple count")->required()->check(CLI::PositiveNumber);
    gen_cmd->add_option("--seed", gen_seed, "random seed")->required();
    gen_cmd->add_option("--out", gen_out, "output CSV path")->required();
    gen_cmd->add_option("--d", gen_d, "attribute count (default 3)");
    gen_cmd->add_option("--rates", gen_rates, "leading rate attributes (default 1)");
    gen_cmd->add_option("--attrs", gen_attrs, "explicit schema, e.g. freq:rate,dist:normalized");
    gen_cmd->add_option("--lambda-min", gen_lambda_min, "rate lower bound (default 1)");
    gen_cmd->add_option("--lambda-max", gen_lambda_max, "rate upper bound (default 50)");

    BenchOptions bench_opts;
    bool bench_timing = false;
    CLI::App* bench_cmd = app.add_subcommand("bench", "exact-vs-clamp comparison run");
    bench_cmd->add_option("--n", bench_opts.n, "tuple count (default 10000)")
        ->check(CLI::PositiveNumber);
    bench_cmd->add_option("--d", bench_opts.d, "attribute count (default 3)");
    bench_cmd->add_option("--seed", bench_opts.seed, "random seed (default 1)");
    bench_cmd->add_option("--k", bench_opts.k, "survival threshold (default 8)")
        ->check(CLI::NonNegativeNumber);
    bench_cmd->add_option("--lambda-min", bench_opts.lambda_min, "rate lower bound");
    bench_cmd->add_option("--lambda-max", bench_opts.lambda_max, "rate upper bound");
    bench_cmd->add_flag("--po", bench_opts.include_po, "also compute po in both modes");
    bench_cmd->add_flag("--timing", bench_timing, "include wall-clock timings");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            app.exit(e, out, err);
            return exit_ok;
        }
        app.exit(e, out, err);
        return exit_usage;
    }

    try {
        for (const char* name : {"sky", "nd", "po"}) {
            const QueryCommand& qc = queries[name];
            if (qc.cmd->parsed()) {
                return query_command(qc, name, out, err);
            }
        }
        if (cdf_cmd->parsed()) {
            const PoissonParams params{cdf_lambda};
            if (cdf_mode == "quantile") {
                if (cdf_p_opt->count() == 0) {
                    err << "error: quantile mode requires --p\n";
                    return exit_usage;
                }
                out << quantile(params, cdf_p) << "\n";
                return exit_ok;
            }
            if (cdf_k_opt->count() == 0) {
                err << "error: mode '" << cdf_mode << "' requires --k\n";
                return exit_usage;
            }
            double value = 0.0;
            if (cdf_mode == "cdf") {
                value = cdf(params, cdf_k);
            } else if (cdf_mode == "survival") {
                value = survival(params, cdf_k);
            } else {  // pmf
                if (std::floor(cdf_k) != cdf_k) {
                    err << "error: pmf mode requires an integer --k\n";
                    return exit_usage;
                }
                value = pmf(params, static_cast<long long>(cdf_k));
            }
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.10f", value);
            out << buf << "\n";
            return exit_ok;
        }
        if (gen_cmd->parsed()) {
            const AttributeSchema schema = gen_attrs.empty()
                                               ? default_gen_schema(gen_d, gen_rates)
                                               : schema_from_attrs(gen_attrs);
            const Relation relation = gen_dataset(
                GenOptions{gen_n, schema, gen_seed, gen_lambda_min, gen_lambda_max});
            write_relation(relation, gen_out);
            out << "wrote " << gen_out << " (" << relation.tuples.size() << " tuples)\n";
            return exit_ok;
        }
        if (bench_cmd->parsed()) {
            const BenchReport report = run_bench(bench_opts);
            out << bench_document(report, bench_timing);
            return exit_ok;
        }
        err << "error: no subcommand selected\n";
        return exit_usage;
    } catch (const DataError& e) {
        err << "error: " << e.what() << "\n";
        return exit_data;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << "\n";
        return exit_data;
    } catch (const NumericError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return exit_numeric;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return exit_numeric;
    }
}

}  // namespace fskyline::io
