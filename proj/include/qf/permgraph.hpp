#ifndef QF_PERMGRAPH_HPP
#define QF_PERMGRAPH_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qf/group.hpp"

namespace qf {

/// Fixed-width bitset sized at run time; the clique search works on rows of
/// these.
struct Bitset {
    int n = 0;
    std::vector<uint64_t> w;

    Bitset() = default;
    explicit Bitset(int n_) : n(n_), w((n_ + 63) / 64, 0) {}

    void set(int i) { w[i >> 6] |= 1ull << (i & 63); }
    void clear(int i) { w[i >> 6] &= ~(1ull << (i & 63)); }
    bool test(int i) const { return (w[i >> 6] >> (i & 63)) & 1; }

    int count() const {
        int c = 0;
        for (uint64_t x : w) c += __builtin_popcountll(x);
        return c;
    }
    bool empty() const {
        for (uint64_t x : w)
            if (x) return false;
        return true;
    }
    void and_with(const Bitset& o) {
        for (size_t i = 0; i < w.size(); ++i) w[i] &= o.w[i];
    }
    bool intersects(const Bitset& o) const {
        for (size_t i = 0; i < w.size(); ++i)
            if (w[i] & o.w[i]) return true;
        return false;
    }
    template <typename Fn>
    void for_each(Fn&& fn) const {
        for (size_t i = 0; i < w.size(); ++i) {
            uint64_t x = w[i];
            while (x) {
                int b = __builtin_ctzll(x);
                fn(static_cast<int>(i * 64 + b));
                x &= x - 1;
            }
        }
    }
    friend bool operator==(const Bitset& a, const Bitset& b) { return a.n == b.n && a.w == b.w; }
};

/// Graph on the fixed-point-free elements of a linear group; u ~ v iff
/// u v^-1 is fixed point free. Vertices are ordered by descending degree,
/// ties broken by lex key, which is also the branching order of the search.
struct PermGraph {
    int p = 0, d = 0;
    long long group_order = 0;
    std::vector<Matrix> verts;
    std::unordered_map<Matrix, int, MatrixHash> vindex;
    std::vector<Bitset> adj;
    long long edges = 0;

    int num_vertices() const { return static_cast<int>(verts.size()); }
    bool has_vertex(const Matrix& m) const { return vindex.count(m) != 0; }
    int vertex_index(const Matrix& m) const {
        auto it = vindex.find(m);
        if (it == vindex.end()) throw matrix_error("matrix is not a graph vertex");
        return it->second;
    }
    Bitset full_mask() const {
        Bitset b(num_vertices());
        for (int i = 0; i < num_vertices(); ++i) b.set(i);
        return b;
    }
};

inline PermGraph build_graph(const LinearGroup& g) {
    if (!is_transitive(g)) throw matrix_error("build_graph: group must be transitive");
    PermGraph graph;
    graph.p = g.p;
    graph.d = g.d;
    graph.group_order = g.order();

    std::vector<Matrix> verts;
    for (const Matrix& m : g.elements)
        if (is_fixed_point_free(m)) verts.push_back(m);
    const int nv = static_cast<int>(verts.size());

    std::vector<Matrix> inv(nv);
    for (int i = 0; i < nv; ++i) inv[i] = mat_inv(verts[i]);
    std::vector<Bitset> adj(nv, Bitset(nv));
    for (int i = 0; i < nv; ++i)
        for (int j = 0; j < i; ++j)
            if (is_fixed_point_free(mat_mul(verts[i], inv[j]))) {
                adj[i].set(j);
                adj[j].set(i);
            }

    // reorder: degree descending, lex key ascending (verts is lex sorted)
    std::vector<int> order(nv);
    for (int i = 0; i < nv; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return adj[a].count() > adj[b].count(); });
    std::vector<int> pos(nv);
    for (int i = 0; i < nv; ++i) pos[order[i]] = i;

    graph.verts.resize(nv);
    graph.adj.assign(nv, Bitset(nv));
    for (int i = 0; i < nv; ++i) {
        graph.verts[i] = verts[order[i]];
        graph.vindex.emplace(verts[order[i]], i);
    }
    for (int i = 0; i < nv; ++i)
        adj[order[i]].for_each([&](int j) { graph.adj[i].set(pos[j]); });
    for (int i = 0; i < nv; ++i) graph.edges += graph.adj[i].count();
    graph.edges /= 2;
    return graph;
}

// ---------------------------------------------------------------------------
// Exhaustive k-clique enumeration (branch and bound over bitsets).
// ---------------------------------------------------------------------------

namespace detail {
struct CliqueHash {
    size_t operator()(const std::vector<uint16_t>& c) const {
        size_t h = 1469598103934665603ull;
        for (uint16_t v : c) {
            h ^= v;
            h *= 1099511628211ull;
        }
        return h;
    }
};
}  // namespace detail

struct CliqueSearchOptions {
    long long node_budget = -1;  // < 0: unlimited
    // coloring bound is recomputed at every node for graphs up to this many
    // vertices; larger graphs fall back to the popcount bound
    int coloring_limit = 1024;
};

using Clique = std::vector<uint16_t>;  // sorted vertex indices

namespace detail {

class CliqueSearch {
public:
    CliqueSearch(const PermGraph& g, int k, const CliqueSearchOptions& opt,
                 const std::function<void(const Clique&)>& emit)
        : g_(g), k_(k), opt_(opt), emit_(emit), use_coloring_(g.num_vertices() <= opt.coloring_limit) {
        color_class_.reserve(64);
    }

    void run(const Bitset& candidates, Clique& partial) { expand(candidates, partial); }

    long long nodes() const { return nodes_; }

private:
    int color_bound(const Bitset& p) {
        color_class_.clear();
        int colors = 0;
        p.for_each([&](int v) {
            for (int c = 0; c < colors; ++c)
                if (!g_.adj[v].intersects(color_class_[c])) {
                    color_class_[c].set(v);
                    return;
                }
            if (colors == static_cast<int>(color_class_.size()))
                color_class_.emplace_back(g_.num_vertices());
            else {
                auto& cc = color_class_[colors];
                std::fill(cc.w.begin(), cc.w.end(), 0);
            }
            color_class_[colors].set(v);
            ++colors;
        });
        return colors;
    }

    void expand(const Bitset& p, Clique& r) {
        ++nodes_;
        if (opt_.node_budget >= 0 && nodes_ > opt_.node_budget)
            throw budget_error("clique search: node budget exceeded");
        const int need = k_ - static_cast<int>(r.size());
        if (need == 0) {
            emit_(r);
            return;
        }
        int avail = p.count();
        if (avail < need) return;
        if (use_coloring_ && need > 2 && color_bound(p) < need) return;

        // branch on candidates in ascending vertex order; each clique is
        // produced exactly once, with sorted vertex list
        Bitset rest = p;
        std::vector<int> cand;
        cand.reserve(avail);
        p.for_each([&](int v) { cand.push_back(v); });
        for (size_t i = 0; i < cand.size(); ++i) {
            if (static_cast<int>(cand.size() - i) < need) break;
            int v = cand[i];
            rest.clear(v);
            Bitset next = rest;
            next.and_with(g_.adj[v]);
            r.push_back(static_cast<uint16_t>(v));
            expand(next, r);
            r.pop_back();
        }
    }

    const PermGraph& g_;
    const int k_;
    CliqueSearchOptions opt_;
    const std::function<void(const Clique&)>& emit_;
    bool use_coloring_;
    long long nodes_ = 0;
    std::vector<Bitset> color_class_;
};

}  // namespace detail

/// Stream every clique of size exactly k whose vertices lie in mask and
/// which contains seed (seed vertices are not re-emitted in the callback
/// cliques; emitted cliques always include them).
inline long long enumerate_cliques_streaming(const PermGraph& graph, int k, const Bitset& mask,
                                             const Clique& seed,
                                             const std::function<void(const Clique&)>& emit,
                                             const CliqueSearchOptions& opt = {}) {
    Bitset candidates = mask;
    for (uint16_t v : seed) {
        if (!mask.test(v)) throw matrix_error("clique seed outside the search mask");
        candidates.and_with(graph.adj[v]);
    }
    for (uint16_t v : seed) candidates.clear(v);
    // verify the seed itself is a clique
    for (size_t i = 0; i < seed.size(); ++i)
        for (size_t j = i + 1; j < seed.size(); ++j)
            if (!graph.adj[seed[i]].test(seed[j]))
                throw matrix_error("clique seed is not a clique");
    if (k < static_cast<int>(seed.size())) return 0;

    auto emit_full = [&](const Clique& partial) {
        Clique full = seed;
        full.insert(full.end(), partial.begin(), partial.end());
        std::sort(full.begin(), full.end());
        emit(full);
    };
    detail::CliqueSearch search(graph, k - static_cast<int>(seed.size()), opt, emit_full);
    Clique partial;
    search.run(candidates, partial);
    return search.nodes();
}

/// All cliques of size exactly k, canonically sorted.
inline std::vector<Clique> enumerate_cliques(const PermGraph& graph, int k,
                                             const CliqueSearchOptions& opt = {}) {
    std::vector<Clique> out;
    enumerate_cliques_streaming(graph, k, graph.full_mask(), {},
                                [&](const Clique& c) { out.push_back(c); }, opt);
    std::sort(out.begin(), out.end());
    return out;
}

/// All cliques of size exactly k containing the given seed; an empty result
/// certifies non-extendability.
inline std::vector<Clique> extend_to_size(const PermGraph& graph, const Clique& seed, int k,
                                          const CliqueSearchOptions& opt = {}) {
    std::vector<Clique> out;
    enumerate_cliques_streaming(graph, k, graph.full_mask(), seed,
                                [&](const Clique& c) { out.push_back(c); }, opt);
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// Class-driven enumeration. Vertices sending a fixed base point to the same
// image form an independent set, and a clique realizing a sharply transitive
// action picks exactly one vertex per image class. Branching on the smallest
// open class makes the large spread searches feasible.
// ---------------------------------------------------------------------------

/// One bitset per target point: the mask vertices sending base_point there.
/// Vertices of mask sending base_point outside the target list are dropped.
inline std::vector<Bitset> point_classes(const PermGraph& graph, long long base_point,
                                         const std::vector<long long>& targets,
                                         const Bitset& mask) {
    std::unordered_map<long long, int> slot;
    for (size_t i = 0; i < targets.size(); ++i) slot.emplace(targets[i], static_cast<int>(i));
    std::vector<Bitset> classes(targets.size(), Bitset(graph.num_vertices()));
    mask.for_each([&](int v) {
        auto it = slot.find(act(base_point, graph.verts[v]));
        if (it != slot.end()) classes[it->second].set(v);
    });
    return classes;
}

namespace detail {

class ClassCliqueSearch {
public:
    ClassCliqueSearch(const PermGraph& g, const std::vector<Bitset>& classes,
                      const CliqueSearchOptions& opt, const std::function<void(const Clique&)>& emit)
        : g_(g), classes_(classes), opt_(opt), emit_(emit) {}

    void run(const Bitset& p, Clique& r, std::vector<int>& open) { expand(p, r, open); }

    long long nodes() const { return nodes_; }

private:
    static int masked_count(const Bitset& a, const Bitset& b) {
        int c = 0;
        for (size_t i = 0; i < a.w.size(); ++i) c += __builtin_popcountll(a.w[i] & b.w[i]);
        return c;
    }

    void expand(const Bitset& p, Clique& r, std::vector<int>& open) {
        ++nodes_;
        if (opt_.node_budget >= 0 && nodes_ > opt_.node_budget)
            throw budget_error("clique search: node budget exceeded");
        if (open.empty()) {
            Clique out = r;
            std::sort(out.begin(), out.end());
            emit_(out);
            return;
        }
        // fail-first: branch on the open class with fewest candidates
        int best = -1, best_count = INT32_MAX;
        for (int c : open) {
            int cnt = masked_count(p, classes_[c]);
            if (cnt < best_count) {
                best_count = cnt;
                best = c;
                if (cnt == 0) return;
            }
        }
        std::vector<int> rest;
        rest.reserve(open.size() - 1);
        for (int c : open)
            if (c != best) rest.push_back(c);
        Bitset branch = p;
        branch.and_with(classes_[best]);
        branch.for_each([&](int v) {
            Bitset next = p;
            next.and_with(g_.adj[v]);
            r.push_back(static_cast<uint16_t>(v));
            expand(next, r, rest);
            r.pop_back();
        });
    }

    const PermGraph& g_;
    const std::vector<Bitset>& classes_;
    CliqueSearchOptions opt_;
    const std::function<void(const Clique&)>& emit_;
    long long nodes_ = 0;
};

}  // namespace detail

/// Every clique containing seed with exactly one vertex of each class; the
/// classes must be independent sets (guaranteed for point classes). Returns
/// the node count.
inline long long enumerate_class_cliques_streaming(const PermGraph& graph,
                                                   const std::vector<Bitset>& classes,
                                                   const Bitset& mask, const Clique& seed,
                                                   const std::function<void(const Clique&)>& emit,
                                                   const CliqueSearchOptions& opt = {}) {
    Bitset p = mask;
    std::vector<int> open;
    for (size_t c = 0; c < classes.size(); ++c) {
        bool taken = false;
        for (uint16_t v : seed)
            if (classes[c].test(v)) {
                if (taken) throw matrix_error("seed hits a class twice");
                taken = true;
            }
        if (!taken) open.push_back(static_cast<int>(c));
    }
    for (uint16_t v : seed) p.and_with(graph.adj[v]);
    for (size_t i = 0; i < seed.size(); ++i)
        for (size_t j = i + 1; j < seed.size(); ++j)
            if (!graph.adj[seed[i]].test(seed[j])) throw matrix_error("clique seed is not a clique");

    Clique r = seed;
    detail::ClassCliqueSearch search(graph, classes, opt, emit);
    search.run(p, r, open);
    return search.nodes();
}

/// All full spread cliques (size p^d - 2): one vertex per image class of the
/// base point 0 over every other point.
inline std::vector<Clique> enumerate_spread_cliques(const PermGraph& graph,
                                                    const CliqueSearchOptions& opt = {}) {
    const long long n = num_points(graph.d, graph.p);
    std::vector<long long> targets;
    for (long long w = 1; w < n; ++w) targets.push_back(w);  // every point except base 0
    auto classes = point_classes(graph, 0, targets, graph.full_mask());
    std::vector<Clique> out;
    enumerate_class_cliques_streaming(graph, classes, graph.full_mask(), {},
                                      [&](const Clique& c) { out.push_back(c); }, opt);
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// Spread sets.
// ---------------------------------------------------------------------------

/// Sharply transitive set of matrices containing the identity; the nonzero
/// right multiplications of a quasifield.
struct SpreadSet {
    std::vector<Matrix> matrices;  // sorted lex; contains the identity
    std::string source_case;
};

inline SpreadSet spread_from_clique(const PermGraph& graph, const Clique& clique,
                                    const std::string& source_case = "") {
    SpreadSet s;
    s.source_case = source_case;
    s.matrices.reserve(clique.size() + 1);
    s.matrices.push_back(identity(graph.d, graph.p));
    for (uint16_t v : clique) s.matrices.push_back(graph.verts[v]);
    std::sort(s.matrices.begin(), s.matrices.end());
    return s;
}

/// Direct coverage oracle: every (x, y) pair of nonzero vectors is hit by
/// exactly one member. Independent of the clique machinery.
inline bool verify_sharply_transitive(const std::vector<Matrix>& mats) {
    if (mats.empty()) return false;
    const long long n = num_points(mats[0].d, mats[0].p);
    if (static_cast<long long>(mats.size()) != n) return false;
    std::vector<uint8_t> cover(n * n, 0);
    for (const Matrix& m : mats) {
        if (!mat_invertible(m)) return false;
        for (long long x = 0; x < n; ++x) {
            long long y = act(x, m);
            if (cover[x * n + y]++) return false;
        }
    }
    return true;  // n * n cells, n * n hits, none twice: all exactly once
}

/// Members of the set stabilizing the block setwise; when the input plus the
/// identity is sharply transitive, the restriction to the block is sharply
/// transitive on the block.
inline std::vector<Matrix> block_subclique(const std::vector<Matrix>& mats,
                                           const std::vector<uint16_t>& block) {
    std::vector<char> in_block(num_points(mats.empty() ? 1 : mats[0].d, mats.empty() ? 2 : mats[0].p), 0);
    for (uint16_t v : block) in_block[v] = 1;
    std::vector<Matrix> out;
    for (const Matrix& m : mats) {
        bool stab = true;
        for (uint16_t v : block)
            if (!in_block[act(v, m)]) {
                stab = false;
                break;
            }
        if (stab) out.push_back(m);
    }
    return out;
}

/// Sharp transitivity restricted to a block.
inline bool verify_sharply_transitive_on(const std::vector<Matrix>& mats,
                                         const std::vector<uint16_t>& block) {
    const size_t b = block.size();
    if (mats.size() != b) return false;
    std::vector<int> pos(num_points(mats[0].d, mats[0].p), -1);
    for (size_t i = 0; i < b; ++i) pos[block[i]] = static_cast<int>(i);
    std::vector<uint8_t> cover(b * b, 0);
    for (const Matrix& m : mats)
        for (size_t i = 0; i < b; ++i) {
            int j = pos[act(block[i], m)];
            if (j < 0) return false;  // block not stabilized
            if (cover[i * b + j]++) return false;
        }
    return true;
}

}  // namespace qf

#endif
