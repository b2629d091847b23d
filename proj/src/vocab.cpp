#include "kgqa/vocab.hpp"

#include <fstream>

#include "kgqa/error.hpp"
#include "kgqa/rng.hpp"

namespace kgqa {

namespace {
constexpr const char* kReservedEntityNames[kNumReservedEntities] = {"<no_answer>", "<pad>"};
constexpr const char* kReservedRelationNames[kNumReservedRelations] = {"<no_op>", "<no_answer>",
                                                                       "<start>", "<pad>"};
}  // namespace

int32_t NameTable::get_or_add(std::string_view name) {
    auto it = ids_.find(std::string(name));
    if (it != ids_.end()) return it->second;
    int32_t id = static_cast<int32_t>(names_.size());
    names_.emplace_back(name);
    ids_.emplace(names_.back(), id);
    return id;
}

std::optional<int32_t> NameTable::find(std::string_view name) const {
    auto it = ids_.find(std::string(name));
    if (it == ids_.end()) return std::nullopt;
    return it->second;
}

const std::string& NameTable::name(int32_t id) const {
    if (id < 0 || id >= size()) fail(ErrorCode::invalid_argument, "name table: id out of range");
    return names_[static_cast<size_t>(id)];
}

Vocab::Vocab() {
    for (const char* n : kReservedEntityNames) entities_.get_or_add(n);
    for (const char* n : kReservedRelationNames) relations_.get_or_add(n);
}

EntityId Vocab::add_entity(std::string_view name) {
    auto existing = entities_.find(name);
    if (existing) return *existing;
    if (frozen_) fail(ErrorCode::parse, "unknown entity '" + std::string(name) + "' (vocab is frozen)");
    return entities_.get_or_add(name);
}

RelationId Vocab::add_relation(std::string_view name) {
    auto existing = relations_.find(name);
    if (existing) return *existing;
    if (frozen_)
        fail(ErrorCode::parse, "unknown relation '" + std::string(name) + "' (vocab is frozen)");
    if (inverses_registered_) fail(ErrorCode::state, "cannot add relations after inverse registration");
    RelationId id = relations_.get_or_add(name);
    ++dataset_relations_;
    return id;
}

std::optional<EntityId> Vocab::find_entity(std::string_view name) const {
    return entities_.find(name);
}

std::optional<RelationId> Vocab::find_relation(std::string_view name) const {
    return relations_.find(name);
}

void Vocab::register_inverses() {
    if (inverses_registered_) fail(ErrorCode::state, "inverse relations already registered");
    const int32_t base = kNumReservedRelations;
    for (int32_t r = 0; r < dataset_relations_; ++r) {
        const std::string inv = "_" + relations_.name(base + r);
        if (relations_.find(inv))
            fail(ErrorCode::parse, "relation name collision with inverse '" + inv + "'");
        relations_.get_or_add(inv);
    }
    inverses_registered_ = true;
    frozen_ = true;
}

RelationId Vocab::inverse_of(RelationId r) const {
    if (!inverses_registered_) fail(ErrorCode::state, "inverse relations not registered");
    if (r < kNumReservedRelations) return r;
    if (r < kNumReservedRelations + dataset_relations_) return r + dataset_relations_;
    if (r < num_relations()) return r - dataset_relations_;
    fail(ErrorCode::invalid_argument, "inverse_of: relation id out of range");
}

void Vocab::save(const std::filesystem::path& entities_path,
                 const std::filesystem::path& relations_path) const {
    auto dump = [](const std::filesystem::path& path, const NameTable& t) {
        std::ofstream out(path);
        if (!out) fail(ErrorCode::io, "cannot write " + path.string());
        for (int32_t id = 0; id < t.size(); ++id) out << t.name(id) << '\t' << id << '\n';
    };
    dump(entities_path, entities_);
    dump(relations_path, relations_);
}

Vocab Vocab::load(const std::filesystem::path& entities_path,
                  const std::filesystem::path& relations_path) {
    Vocab v;
    auto read = [](const std::filesystem::path& path, auto&& add) {
        std::ifstream in(path);
        if (!in) fail(ErrorCode::io, "cannot read " + path.string());
        std::string line;
        int32_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty()) continue;
            auto tab = line.find('\t');
            if (tab == std::string::npos)
                fail(ErrorCode::parse, path.string() + ":" + std::to_string(lineno) +
                                           ": expected `name<TAB>id`");
            const std::string name = line.substr(0, tab);
            const int32_t id = std::stoi(line.substr(tab + 1));
            add(name, id, lineno);
        }
    };
    read(entities_path, [&](const std::string& name, int32_t id, int32_t lineno) {
        const int32_t got = id < kNumReservedEntities
                                ? (v.entity_name(id) == name ? id : -1)
                                : v.entities_.get_or_add(name);
        if (got != id)
            fail(ErrorCode::parse, entities_path.string() + ":" + std::to_string(lineno) +
                                       ": ids must be dense, sorted, and reserve ids 0.." +
                                       std::to_string(kNumReservedEntities - 1));
    });
    // Relation files saved after register_inverses() carry the inverse
    // block as a mirrored second half ("_" + dataset name). Detect that
    // layout exactly; anything else is a plain dataset relation list.
    std::vector<std::pair<std::string, int32_t>> rels;
    read(relations_path, [&](const std::string& name, int32_t id, int32_t) {
        rels.emplace_back(name, id);
    });
    for (size_t i = 0; i < rels.size(); ++i)
        if (rels[i].second != static_cast<int32_t>(i))
            fail(ErrorCode::parse, relations_path.string() + ": ids must be dense and sorted");
    const int32_t n = static_cast<int32_t>(rels.size()) - kNumReservedRelations;
    if (n < 0) fail(ErrorCode::parse, relations_path.string() + ": missing reserved relations");
    bool mirrored = n > 0 && n % 2 == 0;
    for (int32_t i = 0; mirrored && i < n / 2; ++i)
        mirrored = rels[kNumReservedRelations + n / 2 + i].first ==
                   "_" + rels[kNumReservedRelations + i].first;
    const int32_t n_dataset = mirrored ? n / 2 : n;
    for (int32_t i = 0; i < n_dataset; ++i) v.add_relation(rels[kNumReservedRelations + i].first);
    if (mirrored) v.register_inverses();
    return v;
}

uint64_t Vocab::fingerprint() const {
    uint64_t h = 0xcbf29ce484222325ULL;
    auto mixstr = [&h](const std::string& s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
        h ^= 0xff;
        h *= 0x100000001b3ULL;
    };
    for (int32_t i = 0; i < entities_.size(); ++i) mixstr(entities_.name(i));
    for (int32_t i = 0; i < relations_.size(); ++i) mixstr(relations_.name(i));
    return h;
}

}  // namespace kgqa
