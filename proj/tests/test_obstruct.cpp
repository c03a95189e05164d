#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "qf/catalog.hpp"
#include "qf/obstruct.hpp"

using namespace qf;

namespace {

GroupCache& cache() {
    static GroupCache c("/tmp/qf_test_cache");
    return c;
}

// Independent recomputation of the intersection-size set with reversed
// iteration orders.
std::vector<long long> sizes_reversed(const LinearGroup& g, const std::vector<uint16_t>& a,
                                      const std::vector<uint16_t>& b) {
    std::set<long long> sizes;
    for (auto it = g.elements.rbegin(); it != g.elements.rend(); ++it) {
        long long cnt = 0;
        for (auto bv = b.rbegin(); bv != b.rend(); ++bv) {
            long long img = act(*bv, *it);
            for (uint16_t av : a)
                if (av == img) {
                    ++cnt;
                    break;
                }
        }
        sizes.insert(cnt);
    }
    return {sizes.begin(), sizes.end()};
}

}  // namespace

TEST_CASE("obstruction certificates for the alternating-core cases") {
    for (const char* id : {"4.k-360", "4.k-720"}) {
        LinearGroup g = build_case(find_case(id), cache());
        ObstructionCertificate cert = find_obstruction(g, 5, "sylow", id);
        REQUIRE(cert.found);
        CHECK(cert.hypothesis_holds);
        CHECK(cert.orbit_a.size() == 5);
        CHECK(cert.orbit_b.size() == 5);
        CHECK(cert.p == 2);
        for (long long s : cert.intersection_sizes) CHECK((s == 0 || s == 2));
        CHECK(cert.subgroup_descriptor == "Sylow-5");

        // order-independence of the raw size set
        CHECK(sizes_reversed(g, cert.orbit_a, cert.orbit_b) == cert.intersection_sizes);

        // double certification: the direct spread search is empty
        PermGraph graph = build_graph(g);
        CHECK(enumerate_spread_cliques(graph).empty());
    }
}

TEST_CASE("obstruction certificates for the small quaternionic-core cases") {
    for (const char* id : {"4.e-240", "4.e-480"}) {
        LinearGroup g = build_case(find_case(id), cache());
        ObstructionCertificate cert = find_obstruction(g, 5, "sylow-normalizer", id);
        REQUIRE(cert.found);
        CHECK(cert.hypothesis_holds);
        CHECK(cert.orbit_a.size() == 40);
        CHECK(cert.orbit_b.size() == 40);
        CHECK(cert.p == 3);
        for (long long s : cert.intersection_sizes) CHECK((s == 0 || s == 24));

        // the Sylow-5 normalizer: order 40 at index 6; order 80 in the larger
        // group (the Sylow count must be 1 mod 5, so index 12 is impossible)
        LinearGroup h = normalizer_in_group(g, sylow_subgroup(g, 5));
        CHECK(h.order() == (g.order() == 240 ? 40 : 80));

        CHECK(sizes_reversed(g, cert.orbit_a, cert.orbit_b) == cert.intersection_sizes);

        PermGraph graph = build_graph(g);
        CHECK(enumerate_spread_cliques(graph).empty());
    }
}

TEST_CASE("negative control: a full orbit against itself") {
    LinearGroup g = build_case(find_case("4.k-360"), cache());
    std::vector<uint16_t> all;
    for (long long v = 0; v < g.num_points(); ++v) all.push_back(static_cast<uint16_t>(v));
    ObstructionCertificate cert = intersection_certificate(g, all, all, "4.k-360", "full orbit");
    CHECK_FALSE(cert.hypothesis_holds);
    // g = 1 contributes |A inter A| = |A|
    CHECK(std::binary_search(cert.intersection_sizes.begin(), cert.intersection_sizes.end(),
                             static_cast<long long>(all.size())));
}

TEST_CASE("no passing certificate where cliques exist") {
    LinearGroup g = build_case(find_case("4.e-960"), cache());
    ObstructionCertificate cert = find_obstruction(g, 5, "sylow-normalizer", "4.e-960");
    CHECK_FALSE(cert.found);
    CHECK_FALSE(cert.hypothesis_holds);
}

TEST_CASE("find_obstruction argument validation") {
    LinearGroup g = build_case(find_case("4.k-360"), cache());
    CHECK_THROWS_AS(find_obstruction(g, 7, "sylow"), obstruct_error);
    CHECK_THROWS_AS(find_obstruction(g, 5, "elephant"), obstruct_error);
}

TEST_CASE("clique orbit representatives agree with a brute-force orbit scan") {
    LinearGroup g = build_case(find_case("4.a-48"), cache());
    PermGraph graph = build_graph(g);
    auto cliques = enumerate_spread_cliques(graph);
    REQUIRE(cliques.size() == 4);

    std::vector<std::vector<uint16_t>> perms;
    for (const Matrix& m : g.generators) {
        Matrix minv = mat_inv(m);
        std::vector<uint16_t> perm(graph.num_vertices());
        for (int v = 0; v < graph.num_vertices(); ++v)
            perm[v] = static_cast<uint16_t>(
                graph.vertex_index(mat_mul(minv, mat_mul(graph.verts[v], m))));
        perms.push_back(std::move(perm));
    }
    auto reps = detail::clique_orbit_reps(cliques, perms);

    // oracle: act by every group element directly on the matrices
    std::set<Clique> rep_oracle;
    for (const Clique& c : cliques) {
        Clique best = c;
        for (const Matrix& m : g.elements) {
            Matrix minv = mat_inv(m);
            Clique img;
            for (uint16_t v : c)
                img.push_back(static_cast<uint16_t>(
                    graph.vertex_index(mat_mul(minv, mat_mul(graph.verts[v], m)))));
            std::sort(img.begin(), img.end());
            if (img < best) best = img;
        }
        rep_oracle.insert(best);
    }
    CHECK(reps == std::vector<Clique>(rep_oracle.begin(), rep_oracle.end()));
}
