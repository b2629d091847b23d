#pragma once
// Integer-coded triple store with CSR adjacency and graph augmentation.
//
// Augmentation (each step optional, applied at most once):
//   inverse:   every original edge (h,r,t) gains (t, _r, h)
//   no_op:     every dataset entity gains a self-loop under <no_op>
//   no_answer: every dataset entity gains an edge to the <no_answer>
//              sink, and the sink gains its single <no_op> self-loop.
//              The sink is absorbing: an episode that enters it can only
//              loop there until the fixed horizon runs out.
//
// The graph is immutable once built (construction and augmentation are
// single-threaded); afterwards any number of readers may query it.

#include <cstdint>
#include <filesystem>
#include <span>
#include <utility>
#include <vector>

#include "kgqa/vocab.hpp"

namespace kgqa {

struct Triple {
    EntityId head;
    RelationId rel;
    EntityId tail;

    auto operator<=>(const Triple&) const = default;
};

struct Action {
    RelationId rel;
    EntityId tail;

    auto operator<=>(const Action&) const = default;
};

struct AugmentFlags {
    bool inverse = false;
    bool no_op = false;
    bool no_answer = false;
};

struct LoadStats {
    size_t lines = 0;
    size_t triples = 0;
    size_t duplicates = 0;
};

// Packed edge key for small masked-edge sets.
inline uint64_t pack_edge(EntityId h, RelationId r, EntityId t) {
    return (static_cast<uint64_t>(h) << 40) | (static_cast<uint64_t>(r) << 24) |
           static_cast<uint64_t>(t);
}

// Sorted immutable edge set; queries are binary searches.
class EdgeSet {
public:
    EdgeSet() = default;
    explicit EdgeSet(std::vector<uint64_t> packed);
    bool contains(EntityId h, RelationId r, EntityId t) const;
    bool empty() const { return packed_.empty(); }
    size_t size() const { return packed_.size(); }

private:
    std::vector<uint64_t> packed_;
};

class KnowledgeGraph {
public:
    // Deduplicates; stats report how many duplicates were dropped.
    static KnowledgeGraph from_triples(std::vector<Triple> triples, const Vocab& vocab,
                                       LoadStats* stats = nullptr);

    // TSV `head<TAB>relation<TAB>tail`. Grows the vocab in first-seen
    // order unless it is frozen, in which case unknown names are errors.
    static KnowledgeGraph load_triples(const std::filesystem::path& path, Vocab& vocab,
                                       LoadStats* stats = nullptr);

    // Writes the original (non-synthetic) triples back as TSV; synthetic
    // edges are reconstructed by augment() and never persisted.
    void save(const std::filesystem::path& path, const Vocab& vocab) const;

    // Applies the requested augmentations. Re-requesting an already
    // applied step is an error. May register inverse ids in the vocab.
    void augment(const AugmentFlags& flags, Vocab& vocab);
    const AugmentFlags& augmented() const { return applied_; }

    // Outgoing edges of e minus `mask`, in (relation, tail) order,
    // truncated to max_out entries. NO_OP / NO_ANSWER edges hold the two
    // smallest relation ids, so truncation can never remove them.
    std::vector<Action> actions(EntityId e, const EdgeSet* mask = nullptr,
                                int max_out = 0) const;
    void actions_into(EntityId e, const EdgeSet* mask, int max_out,
                      std::vector<Action>& out) const;

    std::span<const Action> neighbors(EntityId e) const;
    bool has_edge(EntityId h, RelationId r, EntityId t) const;

    size_t num_edges() const { return static_cast<size_t>(offsets_.empty() ? 0 : offsets_.back()); }
    size_t num_original_triples() const { return original_.size(); }
    std::span<const Triple> original_triples() const { return original_; }
    int32_t num_entities() const { return static_cast<int32_t>(offsets_.size()) - 1; }

private:
    void build_index(const Vocab& vocab, std::vector<Triple> extra);

    std::vector<Triple> original_;   // deduplicated input edges
    std::vector<Triple> synthetic_;  // accumulated augmentation edges
    AugmentFlags applied_;

    // CSR over all edges: adjacency_[offsets_[e] .. offsets_[e+1]).
    std::vector<int64_t> offsets_;
    std::vector<Action> adjacency_;
};

}  // namespace kgqa
