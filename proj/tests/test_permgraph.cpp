#include <catch2/catch_amalgamated.hpp>

#include "qf/catalog.hpp"
#include "qf/permgraph.hpp"

using namespace qf;

namespace {

// Independent oracle: all k-subsets, pairwise adjacency checked directly.
void brute_cliques(const PermGraph& g, int k, int start, Clique& cur, std::vector<Clique>& out) {
    if (static_cast<int>(cur.size()) == k) {
        out.push_back(cur);
        return;
    }
    for (int v = start; v < g.num_vertices(); ++v) {
        bool ok = true;
        for (uint16_t u : cur)
            if (!g.adj[u].test(v)) { ok = false; break; }
        if (!ok) continue;
        cur.push_back(static_cast<uint16_t>(v));
        brute_cliques(g, k, v + 1, cur, out);
        cur.pop_back();
    }
}

std::vector<Clique> brute_cliques(const PermGraph& g, int k) {
    std::vector<Clique> out;
    Clique cur;
    brute_cliques(g, k, 0, cur, out);
    return out;
}

// regular representation of GF(9)*: a sharply transitive cyclic group
LinearGroup gf9_regular() {
    ExtField f = gf9();
    std::vector<Matrix> elems;
    for (int i = 1; i < 9; ++i) elems.push_back(regular_rep(f.from_int(i), f));
    return group_from_elements(elems);
}

}  // namespace

TEST_CASE("graph of a sharply transitive group is complete") {
    LinearGroup g = gf9_regular();
    REQUIRE(g.order() == 8);
    PermGraph graph = build_graph(g);
    CHECK(graph.num_vertices() == 7);  // every nonidentity element is fpf
    CHECK(graph.edges == 7 * 6 / 2);
    for (int i = 0; i < 7; ++i) CHECK_FALSE(graph.adj[i].test(i));

    CHECK(enumerate_cliques(graph, 7).size() == 1);
    CHECK(enumerate_cliques(graph, 3).size() == 35);  // C(7,3)
    CHECK(enumerate_cliques(graph, 8).empty());

    auto spread = spread_from_clique(graph, enumerate_cliques(graph, 7)[0]);
    CHECK(verify_sharply_transitive(spread.matrices));
}

TEST_CASE("graph structure invariants") {
    GroupCache cache;
    LinearGroup g = build_case(find_case("4.a-48"), cache);
    PermGraph graph = build_graph(g);

    // adjacency is symmetric and matches the defining condition
    for (int i = 0; i < graph.num_vertices(); ++i)
        for (int j = 0; j < i; ++j) {
            Matrix q = mat_mul(graph.verts[i], mat_inv(graph.verts[j]));
            CHECK(graph.adj[i].test(j) == is_fixed_point_free(q));
            CHECK(graph.adj[i].test(j) == graph.adj[j].test(i));
        }

    // vertex order: degree descending, lex key ascending on ties
    for (int i = 0; i + 1 < graph.num_vertices(); ++i) {
        int di = graph.adj[i].count(), dj = graph.adj[i + 1].count();
        CHECK(di >= dj);
        if (di == dj) CHECK(graph.verts[i] < graph.verts[i + 1]);
    }

    // deterministic rebuild
    PermGraph again = build_graph(g);
    CHECK(again.verts == graph.verts);
    CHECK(again.edges == graph.edges);

    // every vertex is fpf and lies in the group
    for (const Matrix& m : graph.verts) {
        CHECK(is_fixed_point_free(m));
        CHECK(g.contains(m));
        CHECK(graph.vertex_index(m) >= 0);
    }
    CHECK_THROWS_AS(graph.vertex_index(identity(2, 5)), matrix_error);
}

TEST_CASE("enumeration matches the brute-force subset oracle") {
    GroupCache cache;
    LinearGroup g = build_case(find_case("4.a-48"), cache);
    PermGraph graph = build_graph(g);
    for (int k : {2, 3, 4}) {
        auto fast = enumerate_cliques(graph, k);
        auto slow = brute_cliques(graph, k);
        CHECK(fast == slow);  // both canonically sorted
    }
}

TEST_CASE("maximal cliques of the order-48 case") {
    GroupCache cache;
    LinearGroup g = build_case(find_case("4.a-48"), cache);
    PermGraph graph = build_graph(g);
    auto cliques = enumerate_cliques(graph, 23);  // p^d - 2
    CHECK(cliques.size() == 4);
    for (const Clique& c : cliques) {
        auto spread = spread_from_clique(graph, c, "4.a-48");
        CHECK(spread.matrices.size() == 24);
        CHECK(verify_sharply_transitive(spread.matrices));
    }
    CHECK(enumerate_cliques(graph, 24).empty());
}

TEST_CASE("class-driven search agrees with the generic enumerator") {
    GroupCache cache;
    for (const char* id : {"4.a-48", "4.a-96"}) {
        LinearGroup g = build_case(find_case(id), cache);
        PermGraph graph = build_graph(g);
        int k = static_cast<int>(num_points(g.d, g.p)) - 1;
        CHECK(enumerate_spread_cliques(graph) == enumerate_cliques(graph, k));
    }

    // complete graph of a regular group: the unique full clique
    LinearGroup reg = gf9_regular();
    PermGraph graph = build_graph(reg);
    auto spreads = enumerate_spread_cliques(graph);
    REQUIRE(spreads.size() == 1);
    CHECK(spreads == enumerate_cliques(graph, 7));

    // budget applies here too
    GroupCache cache2;
    LinearGroup g48 = build_case(find_case("4.a-48"), cache2);
    PermGraph g48g = build_graph(g48);
    CliqueSearchOptions opt;
    opt.node_budget = 2;
    CHECK_THROWS_AS(enumerate_spread_cliques(g48g, opt), budget_error);
}

TEST_CASE("clique counts are conjugation invariant") {
    GroupCache cache;
    LinearGroup g = build_case(find_case("4.a-48"), cache);
    Matrix t(2, 5);
    t.set(0, 0, 1); t.set(0, 1, 2); t.set(1, 0, 0); t.set(1, 1, 3);
    Matrix tinv = mat_inv(t);
    std::vector<Matrix> conj;
    for (const Matrix& m : g.elements) conj.push_back(mat_mul(tinv, mat_mul(m, t)));
    LinearGroup h = group_from_elements(conj);
    CHECK(enumerate_cliques(build_graph(h), 23).size() == 4);
}

TEST_CASE("extend_to_size") {
    GroupCache cache;
    LinearGroup g = build_case(find_case("4.a-48"), cache);
    PermGraph graph = build_graph(g);
    auto cliques = enumerate_cliques(graph, 23);
    REQUIRE(!cliques.empty());

    Clique seed(cliques[0].begin(), cliques[0].begin() + 5);
    auto ext = extend_to_size(graph, seed, 23);
    CHECK(!ext.empty());
    for (const Clique& c : ext) {
        CHECK(c.size() == 23);
        CHECK(std::includes(c.begin(), c.end(), seed.begin(), seed.end()));
        CHECK(std::binary_search(cliques.begin(), cliques.end(), c));
    }

    // extending a full clique returns just itself; one step beyond is empty
    CHECK(extend_to_size(graph, cliques[0], 23) == std::vector<Clique>{cliques[0]});
    CHECK(extend_to_size(graph, cliques[0], 24).empty());

    // a non-clique seed is rejected
    Clique bad;
    for (int v = 0; v < graph.num_vertices() && bad.size() < 2; ++v) {
        if (bad.size() == 1 && graph.adj[bad[0]].test(v)) continue;
        bad.push_back(static_cast<uint16_t>(v));
    }
    if (bad.size() == 2) CHECK_THROWS_AS(extend_to_size(graph, bad, 23), matrix_error);
}

TEST_CASE("node budget") {
    GroupCache cache;
    LinearGroup g = build_case(find_case("4.a-48"), cache);
    PermGraph graph = build_graph(g);
    CliqueSearchOptions opt;
    opt.node_budget = 3;
    CHECK_THROWS_AS(enumerate_cliques(graph, 23, opt), budget_error);
}

TEST_CASE("block restriction of a spread set") {
    GroupCache cache;
    LinearGroup g = build_case(find_case("4.a-48"), cache);
    PermGraph graph = build_graph(g);
    auto spread = spread_from_clique(graph, enumerate_cliques(graph, 23)[0]);

    for (const auto& bs : minimal_blocks(g)) {
        for (const auto& blk : bs.blocks) {
            auto sub = block_subclique(spread.matrices, blk);
            if (sub.size() == blk.size()) CHECK(verify_sharply_transitive_on(sub, blk));
        }
    }

    // the full point set is a trivial block
    std::vector<uint16_t> all;
    for (long long v = 0; v < g.num_points(); ++v) all.push_back(static_cast<uint16_t>(v));
    CHECK(block_subclique(spread.matrices, all).size() == spread.matrices.size());
    CHECK(verify_sharply_transitive_on(spread.matrices, all));
}

TEST_CASE("verify_sharply_transitive rejects near misses") {
    LinearGroup g = gf9_regular();
    std::vector<Matrix> mats = g.elements;
    CHECK(verify_sharply_transitive(mats));

    std::vector<Matrix> missing(mats.begin(), mats.end() - 1);
    CHECK_FALSE(verify_sharply_transitive(missing));

    std::vector<Matrix> dup = missing;
    dup.push_back(missing[1]);
    CHECK_FALSE(verify_sharply_transitive(dup));
}
