#ifndef FSKYLINE_IO_HPP
#define FSKYLINE_IO_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fskyline/engine.hpp"
#include "fskyline/relation.hpp"
#include "fskyline/scoring.hpp"

namespace fskyline::io {

/// CLI exit codes.
inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 1;
inline constexpr int exit_data = 2;
inline constexpr int exit_numeric = 3;
inline constexpr int exit_oracle_mismatch = 4;

/// Parsed query-spec document. Maps 1:1 onto a ScoringFamily plus the
/// requested outputs and engine options.
struct QuerySpec {
    AttributeSchema schema;
    std::vector<Transform> transforms;   // one per schema attribute, in order
    std::vector<LinearConstraint> constraints;
    WantSets outputs;
    EngineConfig engine;
    bool oracle_check = false;

    /// Builds the family; throws DataError when the polytope is empty.
    ScoringFamily to_family() const;
};

/// Loads a comma-separated relation (header `id,<attr>...`) and validates
/// every cell against the schema's attribute kinds. Errors carry the row
/// number or the offending id/attribute/value.
Relation load_relation(const std::string& path, const AttributeSchema& schema);

/// Parses and fully validates a JSON query spec; unknown keys are rejected.
QuerySpec parse_query(const std::string& path);

struct GenOptions {
    std::size_t n = 0;
    AttributeSchema schema;
    std::uint64_t seed = 0;
    double lambda_min = 1.0;
    double lambda_max = 50.0;
};

/// Synthetic relation: rate attributes uniform on [lambda_min, lambda_max],
/// normalized attributes uniform on [0, 1]. Deterministic for a fixed seed
/// (the generator maps mt19937_64 output itself, so files are identical
/// across platforms).
Relation gen_dataset(const GenOptions& options);

/// Writes `id,<attr>...` rows with 17-significant-digit decimals so a
/// gen -> load round trip reproduces every value exactly.
void write_relation(const Relation& relation, const std::string& path);

/// JSON result document: sections sets / witnesses / timing_ms / config,
/// keys sorted, ids sorted lexicographically. timing_ms is null unless
/// include_timing is set, keeping default output byte-identical across runs.
std::string result_document(const QueryResult& result, bool include_timing);

struct BenchOptions {
    std::size_t n = 10000;
    std::size_t d = 3;  // one rate attribute plus d-1 normalized ones
    std::uint64_t seed = 1;
    double k = 8.0;
    double lambda_min = 1.0;
    double lambda_max = 50.0;
    bool include_po = false;
    double tolerance = 1e-9;
};

struct BenchReport {
    BenchOptions options;
    PhaseTimings timing_exact;
    PhaseTimings timing_clamp;
    std::size_t nd_size_exact = 0;
    std::size_t nd_size_clamp = 0;
    std::size_t po_size_exact = 0;
    std::size_t po_size_clamp = 0;
    std::vector<std::string> nd_symmetric_difference;
    double clamp_error_max = 0.0;
    double clamp_error_mean = 0.0;
    /// Sub-instance restricted to tuples whose pairwise vertex-score gaps all
    /// exceed the measured clamp error bound; there the exact and clamped ND
    /// sets must coincide.
    double margin_threshold = 0.0;
    std::size_t filtered_size = 0;
    std::size_t filtered_nd_symmetric_difference = 0;
};

/// Runs the exact and clamped paths over one synthetic instance and compares
/// their ND sets, plus the margin-filtered sub-instance check.
BenchReport run_bench(const BenchOptions& options);

std::string bench_document(const BenchReport& report, bool include_timing);

/// Full CLI: subcommands sky | nd | po | cdf | gen | bench. Returns the
/// process exit code; never writes a partial result document on failure.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fskyline::io

#endif  // FSKYLINE_IO_HPP
