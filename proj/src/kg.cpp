#include "kgqa/kg.hpp"

#include <algorithm>
#include <fstream>

#include "kgqa/error.hpp"

namespace kgqa {

EdgeSet::EdgeSet(std::vector<uint64_t> packed) : packed_(std::move(packed)) {
    std::sort(packed_.begin(), packed_.end());
    packed_.erase(std::unique(packed_.begin(), packed_.end()), packed_.end());
}

bool EdgeSet::contains(EntityId h, RelationId r, EntityId t) const {
    return std::binary_search(packed_.begin(), packed_.end(), pack_edge(h, r, t));
}

KnowledgeGraph KnowledgeGraph::from_triples(std::vector<Triple> triples, const Vocab& vocab,
                                            LoadStats* stats) {
    for (const Triple& t : triples) {
        if (t.head < 0 || t.head >= vocab.num_entities() || t.tail < 0 ||
            t.tail >= vocab.num_entities() || t.rel < 0 || t.rel >= vocab.num_relations())
            fail(ErrorCode::invalid_argument, "triple references id outside vocab");
    }
    const size_t before = triples.size();
    std::sort(triples.begin(), triples.end());
    triples.erase(std::unique(triples.begin(), triples.end()), triples.end());
    if (stats) {
        stats->triples = triples.size();
        stats->duplicates = before - triples.size();
    }
    KnowledgeGraph g;
    g.original_ = std::move(triples);
    g.build_index(vocab, {});
    return g;
}

KnowledgeGraph KnowledgeGraph::load_triples(const std::filesystem::path& path, Vocab& vocab,
                                            LoadStats* stats) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::io, "cannot read " + path.string());
    std::vector<Triple> triples;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto t1 = line.find('\t');
        const auto t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
        if (t1 == std::string::npos || t2 == std::string::npos ||
            line.find('\t', t2 + 1) != std::string::npos)
            fail(ErrorCode::parse, path.string() + ":" + std::to_string(lineno) +
                                       ": expected `head<TAB>relation<TAB>tail`");
        const EntityId h = vocab.add_entity(line.substr(0, t1));
        const RelationId r = vocab.add_relation(line.substr(t1 + 1, t2 - t1 - 1));
        const EntityId t = vocab.add_entity(line.substr(t2 + 1));
        triples.push_back({h, r, t});
    }
    LoadStats local;
    KnowledgeGraph g = from_triples(std::move(triples), vocab, &local);
    local.lines = lineno;
    if (stats) *stats = local;
    return g;
}

void KnowledgeGraph::save(const std::filesystem::path& path, const Vocab& vocab) const {
    std::ofstream out(path);
    if (!out) fail(ErrorCode::io, "cannot write " + path.string());
    for (const Triple& t : original_)
        out << vocab.entity_name(t.head) << '\t' << vocab.relation_name(t.rel) << '\t'
            << vocab.entity_name(t.tail) << '\n';
}

void KnowledgeGraph::augment(const AugmentFlags& flags, Vocab& vocab) {
    if ((flags.inverse && applied_.inverse) || (flags.no_op && applied_.no_op) ||
        (flags.no_answer && applied_.no_answer))
        fail(ErrorCode::state, "graph already augmented with a requested flag");

    std::vector<Triple> added;
    if (flags.inverse) {
        if (!vocab.has_inverses()) vocab.register_inverses();
        added.reserve(original_.size());
        for (const Triple& t : original_)
            added.push_back({t.tail, vocab.inverse_of(t.rel), t.head});
        applied_.inverse = true;
    }
    if (flags.no_op) {
        for (EntityId e = kNumReservedEntities; e < vocab.num_entities(); ++e)
            added.push_back({e, kNoOpRelation, e});
        applied_.no_op = true;
    }
    if (flags.no_answer) {
        for (EntityId e = kNumReservedEntities; e < vocab.num_entities(); ++e)
            added.push_back({e, kNoAnswerRelation, kNoAnswerEntity});
        // The sink's only edge; makes it absorbing under any policy.
        added.push_back({kNoAnswerEntity, kNoOpRelation, kNoAnswerEntity});
        applied_.no_answer = true;
    }
    build_index(vocab, std::move(added));
}

void KnowledgeGraph::build_index(const Vocab& vocab, std::vector<Triple> extra) {
    synthetic_.insert(synthetic_.end(), extra.begin(), extra.end());
    const int32_t n = vocab.num_entities();
    if (n >= (1 << 24) || vocab.num_relations() >= (1 << 16))
        fail(ErrorCode::invalid_argument, "graph exceeds packed edge-key capacity");

    std::vector<int64_t> counts(static_cast<size_t>(n) + 1, 0);
    for (const Triple& t : original_) ++counts[static_cast<size_t>(t.head) + 1];
    for (const Triple& t : synthetic_) ++counts[static_cast<size_t>(t.head) + 1];
    for (size_t i = 1; i < counts.size(); ++i) counts[i] += counts[i - 1];
    offsets_ = counts;

    adjacency_.assign(static_cast<size_t>(offsets_.back()), Action{});
    std::vector<int64_t> cursor(offsets_.begin(), offsets_.end() - 1);
    auto place = [&](const Triple& t) {
        adjacency_[static_cast<size_t>(cursor[t.head]++)] = Action{t.rel, t.tail};
    };
    for (const Triple& t : original_) place(t);
    for (const Triple& t : synthetic_) place(t);
    for (int32_t e = 0; e < n; ++e)
        std::sort(adjacency_.begin() + offsets_[e], adjacency_.begin() + offsets_[e + 1]);
}

std::span<const Action> KnowledgeGraph::neighbors(EntityId e) const {
    if (e < 0 || e >= num_entities()) fail(ErrorCode::invalid_argument, "entity id out of range");
    return {adjacency_.data() + offsets_[e],
            static_cast<size_t>(offsets_[e + 1] - offsets_[e])};
}

void KnowledgeGraph::actions_into(EntityId e, const EdgeSet* mask, int max_out,
                                  std::vector<Action>& out) const {
    out.clear();
    for (const Action& a : neighbors(e)) {
        if (max_out > 0 && static_cast<int>(out.size()) >= max_out) break;
        if (mask && !mask->empty() && mask->contains(e, a.rel, a.tail)) continue;
        out.push_back(a);
    }
}

std::vector<Action> KnowledgeGraph::actions(EntityId e, const EdgeSet* mask, int max_out) const {
    std::vector<Action> out;
    actions_into(e, mask, max_out, out);
    return out;
}

bool KnowledgeGraph::has_edge(EntityId h, RelationId r, EntityId t) const {
    auto span = neighbors(h);
    return std::binary_search(span.begin(), span.end(), Action{r, t});
}

}  // namespace kgqa
