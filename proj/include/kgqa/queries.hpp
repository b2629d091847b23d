// Question sets: (entity, relation) pairs with a gold answer set and a split.
//
// On disk a query file is TSV, one `entity<TAB>relation<TAB>answer` row per
// gold answer. Rows sharing (entity, relation) merge into a single query.
// A row whose answer is the reserved `<no_answer>` name marks the query as
// unanswerable; in memory that is an empty gold set, and mixing it with real
// answers is an error.

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "kgqa/kg.hpp"
#include "kgqa/vocab.hpp"

namespace kgqa {

enum class Split { train, valid, test };

const char* split_name(Split s);

struct Query {
    EntityId entity = 0;
    RelationId rel = 0;
    std::vector<EntityId> answers;  // sorted, deduplicated, never the sink
    Split split = Split::train;

    bool unanswerable() const { return answers.empty(); }
    bool is_gold(EntityId e) const;
};

// Parses a query file against a frozen vocab, stamping every query with the
// given split. Unknown names are collected and reported together (with line
// numbers) so a bad file surfaces every problem in one pass.
std::vector<Query> load_queries(const std::filesystem::path& path, const Vocab& vocab,
                                Split split);

void save_queries(const std::filesystem::path& path, const std::vector<Query>& queries,
                  const Vocab& vocab);

// Edges a rollout for q must not see. Train queries hide their own gold
// edges, (e, r, a) plus (a, r^-1, e) when inverses exist, because the query
// relation's own edge would leak the answer in one hop. Valid and test
// queries were never edges in the graph, so their mask is empty.
EdgeSet mask_for(const Query& q, const Vocab& vocab);

}  // namespace kgqa
