// Desk-scale benchmark generator: a random knowledge graph with planted
// two-hop composition rules and a controlled share of unanswerable queries.
//
// Each rule says query relation q holds between e and c whenever edges
// (e, body1, b) and (b, body2, c) exist. Query relations never appear as
// graph edges, so the composition is the only route to an answer. A rule's
// `branch` sets how many body2 tails each intermediate gets; the gold answer
// is a single designated tail, so rules with branch > 1 have an accuracy
// ceiling of 1/branch on unseen queries. Unanswerable queries point at
// entities from an isolated answer pool that no edge touches, which a
// bounded search verifies at generation time.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "kgqa/kg.hpp"
#include "kgqa/queries.hpp"
#include "kgqa/vocab.hpp"

namespace kgqa {

struct SyntheticRule {
    std::string query_rel;
    std::string body1;
    std::string body2;
    int branch = 1;
};

struct SyntheticSpec {
    int n_entities = 1000;
    int n_noise_relations = 8;
    std::vector<SyntheticRule> rules;  // empty = default four-rule ladder
    double density = 6.0;              // mean base out-degree, planted edges included
    double unreachable_fraction = 0.156;
    int n_train = 1200;
    int n_valid = 300;
    int n_test = 300;
    int answer_pool = 40;  // isolated entities used as unanswerable golds
    int verify_hops = 3;
    uint64_t seed = 7;

    static std::vector<SyntheticRule> default_rules();
    void validate() const;
};

struct SyntheticData {
    Vocab vocab;
    KnowledgeGraph graph;
    std::vector<Query> train;
    std::vector<Query> valid;
    std::vector<Query> test;
};

// Deterministic per spec (including seed). Fails if the spec cannot host the
// requested queries, or if the post-generation reachability audit finds an
// answerable gold out of range or an unanswerable gold in range.
SyntheticData generate_synthetic(const SyntheticSpec& spec);

// Writes graph.tsv, {train,valid,test}_queries.tsv, entities.tsv,
// relations.tsv under dir, creating it if needed.
void write_synthetic(const SyntheticData& data, const std::filesystem::path& dir);

}  // namespace kgqa
