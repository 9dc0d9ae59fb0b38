#include <doctest.h>

#include <algorithm>
#include <random>

#include "fskyline/engine.hpp"
#include "fskyline/errors.hpp"
#include "fskyline/oracle.hpp"
#include "support/generators.hpp"

using namespace fskyline;

namespace {

Relation identity_relation(std::vector<std::vector<double>> rows) {
    Relation rel;
    const std::size_t d = rows.front().size();
    for (std::size_t i = 0; i < d; ++i) {
        rel.schema.names.push_back("a" + std::to_string(i + 1));
        rel.schema.kinds.push_back(AttributeKind::normalized);
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        rel.tuples.push_back(Tuple{"t" + std::to_string(i + 1), std::move(rows[i])});
    }
    return rel;
}

ScoringFamily identity_family(const Relation& rel,
                              std::vector<LinearConstraint> constraints = {}) {
    std::vector<Transform> transforms(rel.schema.arity(), Transform::identity());
    return ScoringFamily{rel.schema, transforms,
                         WeightPolytope(rel.schema.arity(), std::move(constraints))};
}

}  // namespace

TEST_CASE("sky_naive basics") {
    Relation single = identity_relation({{0.4, 0.4}});
    CHECK(oracle::sky_naive(single, identity_family(single)) ==
          std::vector<std::string>{"t1"});

    // duplicated values: no strict dominance, both retained
    Relation dup = identity_relation({{0.3, 0.3}, {0.3, 0.3}});
    CHECK(oracle::sky_naive(dup, identity_family(dup)) ==
          std::vector<std::string>{"t1", "t2"});
}

TEST_CASE("nd_brute reduces to sky_naive on the full simplex with identities") {
    testgen::Options o;
    o.n = 30;
    o.d = 3;
    o.identity_only = true;
    o.full_simplex = true;
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
        const auto inst = testgen::instance(o, seed);
        CHECK(oracle::nd_brute(inst.relation, inst.family) ==
              oracle::sky_naive(inst.relation, inst.family));
    }
}

TEST_CASE("nd_brute keeps mutually incomparable pairs") {
    Relation rel = identity_relation({{0.2, 0.8}, {0.8, 0.2}});
    CHECK(oracle::nd_brute(rel, identity_family(rel)) ==
          std::vector<std::string>{"t1", "t2"});
}

TEST_CASE("oracle outputs ignore tuple order") {
    testgen::Options o;
    o.n = 40;
    const auto inst = testgen::instance(o, 4);
    const auto base_nd = oracle::nd_brute(inst.relation, inst.family);
    const auto base_sky = oracle::sky_naive(inst.relation, inst.family);
    std::mt19937_64 eng(55);
    Relation shuffled = inst.relation;
    for (int round = 0; round < 4; ++round) {
        std::shuffle(shuffled.tuples.begin(), shuffled.tuples.end(), eng);
        CHECK(oracle::nd_brute(shuffled, inst.family) == base_nd);
        CHECK(oracle::sky_naive(shuffled, inst.family) == base_sky);
    }
}

TEST_CASE("weight_grid samples stay inside the polytope") {
    WeightPolytope simplex(2, {});
    const auto coarse = oracle::weight_grid(simplex, 0.5);
    REQUIRE(coarse.size() == 3);
    for (const auto& w : coarse) {
        CHECK(simplex.contains(w, 1e-12));
    }

    std::vector<LinearConstraint> rows{{{1.0, -1.0}, ConstraintSense::less_equal, 0.0}};
    WeightPolytope half(2, rows);
    for (const auto& w : oracle::weight_grid(half, 0.01)) {
        CHECK(half.contains(w, 1e-12));
        CHECK(w[0] <= w[1] + 1e-12);
    }
}

TEST_CASE("po_grid certifies a singleton nd") {
    Relation rel = identity_relation({{0.1, 0.1}, {0.5, 0.5}});
    const auto cert = oracle::po_grid(rel, identity_family(rel));
    CHECK(cert.certified_po == std::vector<std::string>{"t1"});
    CHECK(cert.certified_not_po.empty());
}

TEST_CASE("po_grid refutes the uniformly-worse midpoint row") {
    Relation rel = identity_relation({{0.1, 0.6}, {0.6, 0.1}, {0.45, 0.45}});
    const auto cert = oracle::po_grid(rel, identity_family(rel));
    CHECK(std::find(cert.certified_not_po.begin(), cert.certified_not_po.end(), "t3") !=
          cert.certified_not_po.end());
    CHECK(std::find(cert.certified_po.begin(), cert.certified_po.end(), "t1") !=
          cert.certified_po.end());
    CHECK(std::find(cert.certified_po.begin(), cert.certified_po.end(), "t2") !=
          cert.certified_po.end());
}

TEST_CASE("certified sets are disjoint and cover nd with undecided") {
    testgen::Options o;
    o.n = 30;
    o.d = 3;
    for (std::uint64_t seed = 1; seed <= 15; ++seed) {
        const auto inst = testgen::instance(o, seed);
        const auto cert = oracle::po_grid(inst.relation, inst.family);
        const auto nd_ids = oracle::nd_brute(inst.relation, inst.family);
        for (const auto& id : cert.certified_po) {
            CHECK(std::find(cert.certified_not_po.begin(), cert.certified_not_po.end(), id) ==
                  cert.certified_not_po.end());
        }
        CHECK(cert.certified_po.size() + cert.certified_not_po.size() +
                  cert.undecided.size() ==
              nd_ids.size());
    }
}

TEST_CASE("po_grid is sound against the lp-backed engine") {
    testgen::Options o;
    o.n = 25;
    o.d = 3;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto inst = testgen::instance(o, seed);
        const auto engine_po = po(inst.relation, inst.family).members;
        const auto cert = oracle::po_grid(inst.relation, inst.family);
        for (const auto& id : cert.certified_po) {
            CHECK(std::binary_search(engine_po.begin(), engine_po.end(), id));
        }
        for (const auto& id : cert.certified_not_po) {
            CHECK_FALSE(std::binary_search(engine_po.begin(), engine_po.end(), id));
        }
    }
}

TEST_CASE("oracle size guards") {
    testgen::Options o;
    o.n = 501;
    o.identity_only = true;
    const auto inst = testgen::instance(o, 1);
    CHECK_THROWS_AS(oracle::nd_brute(inst.relation, inst.family), DataError);

    WeightPolytope simplex(3, {});
    CHECK_THROWS_AS(oracle::weight_grid(simplex, 1e-9), DataError);
}
