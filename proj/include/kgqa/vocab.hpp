#pragma once
// Dense integer coding for entity and relation names.
//
// Reserved ids come first so they are stable regardless of the dataset,
// and so that NO_OP / NO_ANSWER edges sort to the front of every
// adjacency list (action-list truncation can then never drop them).
//
// Inverse relations are allocated as one contiguous block after the
// dataset relations: inverse_of(r) = r + R for dataset r, r - R for an
// inverse id, identity for reserved ids.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace kgqa {

using EntityId = int32_t;
using RelationId = int32_t;

constexpr EntityId kNoAnswerEntity = 0;  // absorbing sink, aka "no answer"
constexpr EntityId kPadEntity = 1;
constexpr int32_t kNumReservedEntities = 2;

constexpr RelationId kNoOpRelation = 0;
constexpr RelationId kNoAnswerRelation = 1;
constexpr RelationId kStartRelation = 2;  // feeds the first history step
constexpr RelationId kPadRelation = 3;
constexpr int32_t kNumReservedRelations = 4;

// First-seen-order name <-> dense id table.
class NameTable {
public:
    int32_t get_or_add(std::string_view name);
    std::optional<int32_t> find(std::string_view name) const;
    const std::string& name(int32_t id) const;
    int32_t size() const { return static_cast<int32_t>(names_.size()); }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, int32_t> ids_;
};

class Vocab {
public:
    // Starts with the reserved names already registered.
    Vocab();

    EntityId add_entity(std::string_view name);
    RelationId add_relation(std::string_view name);
    std::optional<EntityId> find_entity(std::string_view name) const;
    std::optional<RelationId> find_relation(std::string_view name) const;
    const std::string& entity_name(EntityId id) const { return entities_.name(id); }
    const std::string& relation_name(RelationId id) const { return relations_.name(id); }

    // Totals include reserved ids (and inverse relations once registered);
    // these are the embedding-table row counts.
    int32_t num_entities() const { return entities_.size(); }
    int32_t num_relations() const { return relations_.size(); }
    int32_t num_dataset_entities() const { return entities_.size() - kNumReservedEntities; }
    int32_t num_dataset_relations() const { return dataset_relations_; }

    void freeze() { frozen_ = true; }
    bool frozen() const { return frozen_; }

    // Allocates the inverse id block ("_" + name). Freezes the vocab:
    // the block layout breaks if dataset relations are added afterwards.
    void register_inverses();
    bool has_inverses() const { return inverses_registered_; }
    RelationId inverse_of(RelationId r) const;
    bool is_inverse(RelationId r) const {
        return inverses_registered_ && r >= kNumReservedRelations + dataset_relations_;
    }

    // TSV `name<TAB>id`, sorted by id.
    void save(const std::filesystem::path& entities_path,
              const std::filesystem::path& relations_path) const;
    static Vocab load(const std::filesystem::path& entities_path,
                      const std::filesystem::path& relations_path);

    // Order-sensitive content fingerprint, used to pair checkpoints with
    // the dataset they were trained on.
    uint64_t fingerprint() const;

private:
    NameTable entities_;
    NameTable relations_;
    int32_t dataset_relations_ = 0;
    bool inverses_registered_ = false;
    bool frozen_ = false;
};

}  // namespace kgqa
