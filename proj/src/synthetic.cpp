#include "kgqa/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "kgqa/error.hpp"
#include "kgqa/rng.hpp"

namespace kgqa {
namespace {

std::string padded(const char* prefix, int i, int width) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s%0*d", prefix, width, i);
    return buf;
}

// Breadth-first reachability from start, at most `hops` edge traversals.
bool reaches(const KnowledgeGraph& g, EntityId start, const std::vector<EntityId>& targets,
             int hops) {
    std::vector<char> seen(static_cast<size_t>(g.num_entities()), 0);
    std::vector<EntityId> frontier{start};
    seen[start] = 1;
    auto hit = [&](EntityId e) {
        return std::binary_search(targets.begin(), targets.end(), e);
    };
    if (hit(start)) return true;
    for (int step = 0; step < hops && !frontier.empty(); ++step) {
        std::vector<EntityId> next;
        for (EntityId e : frontier) {
            for (const Action& a : g.neighbors(e)) {
                if (seen[a.tail]) continue;
                seen[a.tail] = 1;
                if (hit(a.tail)) return true;
                next.push_back(a.tail);
            }
        }
        frontier = std::move(next);
    }
    return false;
}

}  // namespace

std::vector<SyntheticRule> SyntheticSpec::default_rules() {
    // A difficulty ladder: two deterministic rules, one with a coin-flip
    // answer, one with a one-in-four answer.
    return {
        {"q00", "b00", "b01", 1},
        {"q01", "b02", "b03", 1},
        {"q02", "b04", "b05", 2},
        {"q03", "b06", "b07", 4},
    };
}

void SyntheticSpec::validate() const {
    if (n_entities < 10) fail(ErrorCode::config, "synthetic: need at least 10 entities");
    if (n_noise_relations < 1) fail(ErrorCode::config, "synthetic: need at least 1 noise relation");
    if (density <= 0) fail(ErrorCode::config, "synthetic: density must be positive");
    if (unreachable_fraction < 0 || unreachable_fraction > 1)
        fail(ErrorCode::config, "synthetic: unreachable_fraction must be in [0,1]");
    if (n_train < 1 || n_valid < 1 || n_test < 1)
        fail(ErrorCode::config, "synthetic: every split needs at least 1 query");
    if (answer_pool < 1 || answer_pool >= n_entities)
        fail(ErrorCode::config, "synthetic: answer_pool must be in [1, n_entities)");
    if (verify_hops < 2) fail(ErrorCode::config, "synthetic: verify_hops must be >= 2");
    const auto& rs = rules.empty() ? default_rules() : rules;
    std::set<std::string> names;
    for (const SyntheticRule& r : rs) {
        if (r.branch < 1) fail(ErrorCode::config, "synthetic: rule branch must be >= 1");
        for (const std::string& n : {r.query_rel, r.body1, r.body2})
            if (n.empty()) fail(ErrorCode::config, "synthetic: empty relation name in rule");
        if (!names.insert(r.query_rel).second)
            fail(ErrorCode::config, "synthetic: duplicate query relation " + r.query_rel);
        if (r.body1 == r.query_rel || r.body2 == r.query_rel)
            fail(ErrorCode::config, "synthetic: rule body reuses its query relation");
    }
}

SyntheticData generate_synthetic(const SyntheticSpec& spec) {
    spec.validate();
    const std::vector<SyntheticRule> rules =
        spec.rules.empty() ? SyntheticSpec::default_rules() : spec.rules;
    const int n_rules = static_cast<int>(rules.size());
    Rng rng(spec.seed);

    SyntheticData data;
    Vocab& vocab = data.vocab;
    const int ewidth = spec.n_entities > 10000 ? 6 : 4;
    std::vector<EntityId> ids(static_cast<size_t>(spec.n_entities));
    for (int i = 0; i < spec.n_entities; ++i)
        ids[i] = vocab.add_entity(padded("e", i, ewidth));
    std::vector<RelationId> body1(n_rules), body2(n_rules), qrel(n_rules);
    for (int i = 0; i < n_rules; ++i) {
        qrel[i] = vocab.add_relation(rules[i].query_rel);
        body1[i] = vocab.add_relation(rules[i].body1);
        body2[i] = vocab.add_relation(rules[i].body2);
    }
    std::vector<RelationId> noise(static_cast<size_t>(spec.n_noise_relations));
    for (int i = 0; i < spec.n_noise_relations; ++i)
        noise[i] = vocab.add_relation(padded("x", i, 2));
    vocab.freeze();

    // The last answer_pool entities stay edge-free; unanswerable queries
    // point at them.
    const int n_active = spec.n_entities - spec.answer_pool;
    std::vector<EntityId> pool(ids.begin() + n_active, ids.end());
    std::vector<EntityId> active(ids.begin(), ids.begin() + n_active);

    // Per-split plan: how many queries of each rule, answerable or not.
    struct Planned {
        Split split;
        int rule;
        bool answerable;
    };
    std::vector<Planned> plan;
    int rr = 0;
    for (auto [split, n] : {std::pair{Split::train, spec.n_train},
                            std::pair{Split::valid, spec.n_valid},
                            std::pair{Split::test, spec.n_test}}) {
        const int unreachable =
            static_cast<int>(std::ceil(spec.unreachable_fraction * n));
        std::vector<Planned> here;
        for (int i = 0; i < n; ++i, ++rr)
            here.push_back({split, rr % n_rules, i >= unreachable});
        rng.shuffle(std::span<Planned>(here));
        plan.insert(plan.end(), here.begin(), here.end());
    }

    // Each rule draws its query entities and its intermediates from disjoint
    // halves of a private shuffle, so no entity carries both the rule's body1
    // edge and its body2 edges.
    std::vector<int> need_q(n_rules, 0), need_i(n_rules, 0);
    for (const Planned& p : plan) {
        ++need_q[p.rule];
        if (p.answerable) ++need_i[p.rule];
    }
    std::vector<std::vector<EntityId>> qpool(n_rules), ipool(n_rules);
    for (int r = 0; r < n_rules; ++r) {
        if (need_q[r] + need_i[r] > n_active)
            fail(ErrorCode::config,
                 "synthetic: rule " + rules[r].query_rel + " needs " +
                     std::to_string(need_q[r] + need_i[r]) +
                     " distinct entities but only " + std::to_string(n_active) +
                     " are available outside the answer pool");
        std::vector<EntityId> shuffled = active;
        rng.shuffle(std::span<EntityId>(shuffled));
        qpool[r].assign(shuffled.begin(), shuffled.begin() + need_q[r]);
        ipool[r].assign(shuffled.begin() + need_q[r],
                        shuffled.begin() + need_q[r] + need_i[r]);
    }

    std::vector<Triple> triples;
    std::vector<std::vector<Query>*> out = {&data.train, &data.valid, &data.test};
    for (const Planned& p : plan) {
        Query q;
        q.split = p.split;
        q.rel = qrel[p.rule];
        q.entity = qpool[p.rule].back();
        qpool[p.rule].pop_back();
        if (p.answerable) {
            const EntityId b = ipool[p.rule].back();
            ipool[p.rule].pop_back();
            triples.push_back({q.entity, body1[p.rule], b});
            std::vector<EntityId> tails;
            while (static_cast<int>(tails.size()) < rules[p.rule].branch) {
                const EntityId c = active[rng.next_below(static_cast<uint64_t>(n_active))];
                if (c == b || std::find(tails.begin(), tails.end(), c) != tails.end())
                    continue;
                tails.push_back(c);
                triples.push_back({b, body2[p.rule], c});
            }
            q.answers = {tails[0]};
        } else {
            q.answers = {pool[rng.next_below(static_cast<uint64_t>(pool.size()))]};
        }
        out[static_cast<int>(p.split)]->push_back(std::move(q));
    }

    const long target_edges = std::lround(spec.density * spec.n_entities);
    const long n_noise_edges = target_edges - static_cast<long>(triples.size());
    if (n_noise_edges < 0)
        fail(ErrorCode::config,
             "synthetic: density " + std::to_string(spec.density) +
                 " too low to plant rules; planted edges alone need mean out-degree " +
                 std::to_string(static_cast<double>(triples.size()) / spec.n_entities));
    for (long i = 0; i < n_noise_edges; ++i) {
        const EntityId h = active[rng.next_below(static_cast<uint64_t>(n_active))];
        const RelationId r = noise[rng.next_below(noise.size())];
        const EntityId t = active[rng.next_below(static_cast<uint64_t>(n_active))];
        triples.push_back({h, r, t});
    }

    data.graph = KnowledgeGraph::from_triples(std::move(triples), vocab, nullptr);

    // Unanswerable queries carry a pool entity in the file so the reachability
    // audit has a target, but in memory their gold set is empty (the correct
    // final entity is the abstention sink). Swap after auditing.
    Vocab audit_vocab = vocab;
    KnowledgeGraph audit_graph = data.graph;
    audit_graph.augment({.inverse = true, .no_op = true, .no_answer = true}, audit_vocab);
    for (auto* queries : out) {
        for (Query& q : *queries) {
            const bool answerable =
                std::find(pool.begin(), pool.end(), q.answers[0]) == pool.end();
            const bool found = reaches(audit_graph, q.entity, q.answers, spec.verify_hops);
            if (answerable && !found)
                fail(ErrorCode::state, "synthetic: planted answer not reachable (generator bug)");
            if (!answerable && found)
                fail(ErrorCode::state, "synthetic: pool answer reachable (generator bug)");
            if (!answerable) q.answers.clear();
        }
    }
    return data;
}

void write_synthetic(const SyntheticData& data, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    data.graph.save(dir / "graph.tsv", data.vocab);
    save_queries(dir / "train_queries.tsv", data.train, data.vocab);
    save_queries(dir / "valid_queries.tsv", data.valid, data.vocab);
    save_queries(dir / "test_queries.tsv", data.test, data.vocab);
    data.vocab.save(dir / "entities.tsv", dir / "relations.tsv");
}

}  // namespace kgqa
