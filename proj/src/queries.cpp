#include "kgqa/queries.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "kgqa/error.hpp"

namespace kgqa {

const char* split_name(Split s) {
    switch (s) {
        case Split::train: return "train";
        case Split::valid: return "valid";
        case Split::test: return "test";
    }
    return "?";
}

bool Query::is_correct(EntityId e) const {
    if (answers.empty()) return e == kNoAnswerEntity;
    return std::binary_search(answers.begin(), answers.end(), e);
}

std::vector<Query> load_queries(const std::filesystem::path& path, const Vocab& vocab,
                                Split split) {
    if (!vocab.frozen())
        fail(ErrorCode::state, "queries must be loaded against a frozen vocab");
    std::ifstream in(path);
    if (!in) fail(ErrorCode::io, "cannot read " + path.string());

    std::map<std::pair<EntityId, RelationId>, std::vector<EntityId>> grouped;
    std::vector<std::pair<EntityId, RelationId>> order;
    std::vector<std::string> unknown;
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
                                       ": expected `entity<TAB>relation<TAB>answer`");
        const std::string ename = line.substr(0, t1);
        const std::string rname = line.substr(t1 + 1, t2 - t1 - 1);
        const std::string aname = line.substr(t2 + 1);
        const auto e = vocab.find_entity(ename);
        const auto r = vocab.find_relation(rname);
        const auto a = vocab.find_entity(aname);
        if (!e || !r || !a) {
            std::ostringstream os;
            os << "line " << lineno << ":";
            if (!e) os << " unknown entity '" << ename << "'";
            if (!r) os << " unknown relation '" << rname << "'";
            if (!a) os << " unknown entity '" << aname << "'";
            unknown.push_back(os.str());
            continue;
        }
        auto key = std::make_pair(*e, *r);
        auto [it, fresh] = grouped.try_emplace(key);
        if (fresh) order.push_back(key);
        it->second.push_back(*a);
    }
    if (!unknown.empty()) {
        std::ostringstream os;
        os << path.string() << ": " << unknown.size() << " row(s) name ids missing from the vocab:";
        for (const std::string& u : unknown) os << "\n  " << u;
        fail(ErrorCode::parse, os.str());
    }

    std::vector<Query> queries;
    queries.reserve(order.size());
    for (const auto& key : order) {
        Query q;
        q.entity = key.first;
        q.rel = key.second;
        q.split = split;
        q.answers = std::move(grouped[key]);
        std::sort(q.answers.begin(), q.answers.end());
        q.answers.erase(std::unique(q.answers.begin(), q.answers.end()), q.answers.end());
        if (std::binary_search(q.answers.begin(), q.answers.end(), kNoAnswerEntity)) {
            if (q.answers.size() > 1)
                fail(ErrorCode::parse, path.string() + ": query (" +
                                           vocab.entity_name(q.entity) + ", " +
                                           vocab.relation_name(q.rel) +
                                           ") mixes real answers with <no_answer>");
            q.answers.clear();
        }
        queries.push_back(std::move(q));
    }
    return queries;
}

void save_queries(const std::filesystem::path& path, const std::vector<Query>& queries,
                  const Vocab& vocab) {
    std::ofstream out(path);
    if (!out) fail(ErrorCode::io, "cannot write " + path.string());
    for (const Query& q : queries) {
        if (q.answers.empty()) {
            out << vocab.entity_name(q.entity) << '\t' << vocab.relation_name(q.rel) << '\t'
                << vocab.entity_name(kNoAnswerEntity) << '\n';
            continue;
        }
        for (EntityId a : q.answers)
            out << vocab.entity_name(q.entity) << '\t' << vocab.relation_name(q.rel) << '\t'
                << vocab.entity_name(a) << '\n';
    }
}

EdgeSet mask_for(const Query& q, const Vocab& vocab) {
    if (q.split != Split::train) return EdgeSet({});
    std::vector<uint64_t> packed;
    packed.reserve(q.answers.size() * 2);
    for (EntityId a : q.answers) {
        packed.push_back(pack_edge(q.entity, q.rel, a));
        if (vocab.has_inverses())
            packed.push_back(pack_edge(a, vocab.inverse_of(q.rel), q.entity));
    }
    return EdgeSet(std::move(packed));
}

}  // namespace kgqa
