#ifndef QF_GROUP_HPP
#define QF_GROUP_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "qf/matrix.hpp"

namespace qf {

class budget_error : public std::runtime_error {
public:
    explicit budget_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Fully enumerated finite subgroup of GL(d, p). Immutable after
/// construction; elements are kept sorted by lex key and indexed by hash.
struct LinearGroup {
    int d = 0, p = 0;
    std::vector<Matrix> generators;
    std::vector<Matrix> elements;  // sorted lex, deduplicated
    std::unordered_map<Matrix, int, MatrixHash> index;

    long long order() const { return static_cast<long long>(elements.size()); }
    long long num_points() const { return qf::num_points(d, p); }

    bool contains(const Matrix& m) const { return index.count(m) != 0; }
    int element_index(const Matrix& m) const {
        auto it = index.find(m);
        if (it == index.end()) throw matrix_error("element not in group");
        return it->second;
    }

    void finalize() {
        std::sort(elements.begin(), elements.end());
        elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
        index.clear();
        index.reserve(elements.size() * 2);
        for (size_t i = 0; i < elements.size(); ++i) index.emplace(elements[i], static_cast<int>(i));
    }
};

/// Breadth-first closure of a generator list under multiplication.
inline LinearGroup close(const std::vector<Matrix>& generators, long long budget = 100000) {
    if (generators.empty()) throw matrix_error("close: empty generator list");
    const int d = generators[0].d, p = generators[0].p;
    for (const Matrix& g : generators) {
        if (g.d != d || g.p != p) throw matrix_error("close: mixed dimensions or moduli");
        if (!mat_invertible(g)) throw matrix_error("close: singular generator");
    }
    LinearGroup g;
    g.d = d;
    g.p = p;
    g.generators = generators;

    std::unordered_map<Matrix, int, MatrixHash> seen;
    std::vector<Matrix> work;
    Matrix id = identity(d, p);
    seen.emplace(id, 0);
    work.push_back(id);
    for (size_t i = 0; i < work.size(); ++i) {
        Matrix cur = work[i];
        for (const Matrix& s : generators) {
            Matrix nxt = mat_mul(cur, s);
            if (seen.emplace(nxt, static_cast<int>(work.size())).second) {
                work.push_back(nxt);
                if (static_cast<long long>(work.size()) > budget)
                    throw budget_error("close: order budget " + std::to_string(budget) +
                                       " exceeded");
            }
        }
    }
    g.elements = std::move(work);
    g.finalize();
    return g;
}

/// Wrap an already-closed element set; generators are recovered greedily
/// (lex order, adjoin anything outside the running closure).
inline LinearGroup group_from_elements(std::vector<Matrix> elems, long long budget = 100000) {
    if (elems.empty()) throw matrix_error("group_from_elements: empty set");
    std::sort(elems.begin(), elems.end());
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
    const int d = elems[0].d, p = elems[0].p;
    Matrix id = identity(d, p);

    std::vector<Matrix> gens;
    LinearGroup cur;
    cur.d = d;
    cur.p = p;
    cur.elements = {id};
    cur.finalize();
    for (const Matrix& m : elems) {
        if (cur.contains(m)) continue;
        gens.push_back(m);
        cur = close(gens, budget);
        if (cur.order() == static_cast<long long>(elems.size())) break;
    }
    if (gens.empty()) gens.push_back(id);
    if (cur.order() != static_cast<long long>(elems.size()) || cur.elements != elems)
        throw matrix_error("group_from_elements: set is not closed under products");
    return cur;
}

// ---------------------------------------------------------------------------
// Point actions, orbits, transitivity.
// ---------------------------------------------------------------------------

/// Permutation of the nonzero-vector indices induced by m.
inline std::vector<uint16_t> point_perm(const Matrix& m) {
    const long long n = num_points(m.d, m.p);
    std::vector<uint16_t> perm(n);
    for (long long v = 0; v < n; ++v) perm[v] = static_cast<uint16_t>(act(v, m));
    return perm;
}

inline std::vector<long long> orbit_of(long long start, const std::vector<Matrix>& gens) {
    std::vector<long long> orb{start};
    std::set<long long> seen{start};
    for (size_t i = 0; i < orb.size(); ++i)
        for (const Matrix& s : gens) {
            long long img = act(orb[i], s);
            if (seen.insert(img).second) orb.push_back(img);
        }
    std::sort(orb.begin(), orb.end());
    return orb;
}

inline bool is_transitive(const LinearGroup& g) {
    return static_cast<long long>(orbit_of(0, g.generators).size()) == g.num_points();
}

/// Partition of the nonzero vectors into orbits, each sorted, listed by
/// minimal point.
inline std::vector<std::vector<long long>> subgroup_orbits(const LinearGroup& h) {
    const long long n = h.num_points();
    std::vector<char> done(n, 0);
    std::vector<std::vector<long long>> orbits;
    for (long long v = 0; v < n; ++v) {
        if (done[v]) continue;
        auto orb = orbit_of(v, h.generators);
        for (long long x : orb) done[x] = 1;
        orbits.push_back(std::move(orb));
    }
    return orbits;
}

inline int element_order(const Matrix& m, int budget = 100000) { return mat_order(m, budget); }

inline bool is_prime_power_of(long long n, int q) {
    if (n < 1) return false;
    while (n % q == 0) n /= q;
    return n == 1;
}

// ---------------------------------------------------------------------------
// Block systems.
// ---------------------------------------------------------------------------

struct BlockSystem {
    long long block_size = 0;
    std::vector<std::vector<uint16_t>> blocks;   // sorted, ordered by min point
    std::vector<uint16_t> block_of;              // point -> block id
};

/// Finest block systems: for each point pair, the finest congruence fusing
/// the pair, computed by union-find refinement; nontrivial results are
/// deduplicated.
inline std::vector<BlockSystem> minimal_blocks(const LinearGroup& g) {
    if (!is_transitive(g)) throw matrix_error("minimal_blocks: group must be transitive");
    const long long n = g.num_points();
    std::vector<std::vector<uint16_t>> perms;
    for (const Matrix& s : g.generators) perms.push_back(point_perm(s));

    std::set<std::vector<uint16_t>> seen_partitions;
    std::vector<BlockSystem> result;

    std::vector<int> uf(n);
    auto find = [&uf](int x) {
        while (uf[x] != x) {
            uf[x] = uf[uf[x]];
            x = uf[x];
        }
        return x;
    };

    for (long long beta = 1; beta < n; ++beta) {
        std::iota(uf.begin(), uf.end(), 0);
        std::vector<std::pair<int, int>> queue;
        uf[find(static_cast<int>(beta))] = find(0);
        queue.emplace_back(0, static_cast<int>(beta));
        for (size_t qi = 0; qi < queue.size(); ++qi) {
            auto [a, b] = queue[qi];
            for (const auto& perm : perms) {
                int ra = find(perm[a]), rb = find(perm[b]);
                if (ra != rb) {
                    uf[ra] = rb;
                    queue.emplace_back(perm[a], perm[b]);
                }
            }
        }
        // extract the partition as a canonical signature
        std::vector<uint16_t> block_of(n);
        std::map<int, uint16_t> label;
        for (long long v = 0; v < n; ++v) {
            int r = find(static_cast<int>(v));
            auto it = label.find(r);
            if (it == label.end())
                it = label.emplace(r, static_cast<uint16_t>(label.size())).first;
            block_of[v] = it->second;
        }
        long long nblocks = static_cast<long long>(label.size());
        if (nblocks <= 1 || nblocks == n) continue;  // trivial
        if (!seen_partitions.insert(block_of).second) continue;

        BlockSystem bs;
        bs.block_of = block_of;
        bs.blocks.assign(nblocks, {});
        for (long long v = 0; v < n; ++v) bs.blocks[block_of[v]].push_back(static_cast<uint16_t>(v));
        bs.block_size = static_cast<long long>(bs.blocks[0].size());
        result.push_back(std::move(bs));
    }
    std::sort(result.begin(), result.end(), [](const BlockSystem& a, const BlockSystem& b) {
        if (a.block_size != b.block_size) return a.block_size < b.block_size;
        return a.block_of < b.block_of;
    });
    return result;
}

// ---------------------------------------------------------------------------
// Normalizers.
// ---------------------------------------------------------------------------

namespace detail {

/// Enumerate GL(d, p) by rows in lex order, pruning rank-deficient prefixes.
/// Calls fn(T) for every invertible T.
template <typename Fn>
void for_each_gl(int d, int p, Fn&& fn) {
    PrimeField f(p);
    // basis[r]: reduced rows spanning the first r rows; lead[r]: pivot column
    std::vector<std::array<int, kMaxDim>> rows(d), basis(d);
    std::vector<int> lead(d);
    Matrix t(d, p);

    auto rec = [&](auto&& self, int r) -> void {
        if (r == d) {
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) t.set(i, j, rows[i][j]);
            fn(t);
            return;
        }
        std::array<int, kMaxDim> cand{};
        for (;;) {
            // reduce cand against the basis of previous rows
            std::array<int, kMaxDim> red = cand;
            for (int i = 0; i < r; ++i) {
                int c = red[lead[i]];
                if (c == 0) continue;
                for (int j = 0; j < d; ++j) red[j] = f.sub(red[j], f.mul(c, basis[i][j]));
            }
            int pivot = -1;
            for (int j = 0; j < d; ++j)
                if (red[j] != 0) {
                    pivot = j;
                    break;
                }
            if (pivot >= 0) {
                rows[r] = cand;
                int inv = f.inv(red[pivot]);
                for (int j = 0; j < d; ++j) basis[r][j] = f.mul(red[j], inv);
                lead[r] = pivot;
                self(self, r + 1);
            }
            // next candidate row in lex order (first coordinate significant)
            int j = d - 1;
            while (j >= 0 && cand[j] == p - 1) cand[j--] = 0;
            if (j < 0) break;
            ++cand[j];
        }
    };
    rec(rec, 0);
}

}  // namespace detail

inline long long gl_order(int d, int p) {
    long long q = 1;
    for (int i = 0; i < d; ++i) q *= p;
    long long o = 1, pk = 1;
    for (int i = 0; i < d; ++i) {
        o *= q - pk;
        pk *= p;
    }
    return o;
}

/// Normalizer of g in the full GL(d, p), by streaming scan.
inline LinearGroup normalizer_in_gl(const LinearGroup& g, long long scan_budget = 30000000) {
    if (gl_order(g.d, g.p) > scan_budget)
        throw budget_error("normalizer_in_gl: |GL| exceeds scan budget");
    std::vector<Matrix> keep;
    detail::for_each_gl(g.d, g.p, [&](const Matrix& t) {
        Matrix tinv = mat_inv(t);
        for (const Matrix& s : g.generators) {
            if (!g.contains(mat_mul(tinv, mat_mul(s, t)))) return;
        }
        keep.push_back(t);
    });
    return group_from_elements(std::move(keep));
}

/// Normalizer of h inside g; h must be a subgroup of g.
inline LinearGroup normalizer_in_group(const LinearGroup& g, const LinearGroup& h) {
    for (const Matrix& m : h.elements)
        if (!g.contains(m)) throw matrix_error("normalizer_in_group: h is not contained in g");
    std::vector<Matrix> keep;
    for (const Matrix& t : g.elements) {
        Matrix tinv = mat_inv(t);
        bool ok = true;
        for (const Matrix& s : h.generators)
            if (!h.contains(mat_mul(tinv, mat_mul(s, t)))) {
                ok = false;
                break;
            }
        if (ok) keep.push_back(t);
    }
    return group_from_elements(std::move(keep));
}

/// Centralizer of h inside g (elementwise commuting).
inline LinearGroup centralizer_in_group(const LinearGroup& g, const LinearGroup& h) {
    std::vector<Matrix> keep;
    for (const Matrix& t : g.elements) {
        bool ok = true;
        for (const Matrix& s : h.generators)
            if (mat_mul(t, s) != mat_mul(s, t)) {
                ok = false;
                break;
            }
        if (ok) keep.push_back(t);
    }
    return group_from_elements(std::move(keep));
}

// ---------------------------------------------------------------------------
// Sylow subgroups.
// ---------------------------------------------------------------------------

/// Sylow q-subgroup by iterative normalizer extension with the
/// lex-least-witness rule.
inline LinearGroup sylow_subgroup(const LinearGroup& g, int q) {
    if (!is_prime(q) || g.order() % q != 0)
        throw matrix_error("sylow_subgroup: q does not divide the group order");
    long long qpart = 1, rest = g.order();
    while (rest % q == 0) {
        rest /= q;
        qpart *= q;
    }

    auto q_power_part = [&](const Matrix& m) -> Matrix {
        // power m down to its q-part: m^(order / q^k)
        int n = element_order(m);
        int other = n;
        while (other % q == 0) other /= q;
        return mat_pow(m, other);
    };

    // lex-least nontrivial q-element
    Matrix id = identity(g.d, g.p);
    Matrix seed;
    bool found = false;
    for (const Matrix& m : g.elements) {
        if (m == id) continue;
        if (element_order(m) % q != 0) continue;
        Matrix s = q_power_part(m);
        if (s != id && (!found || s < seed)) {
            // elements are scanned in lex order, but the q-part of a later
            // element can still be lex-smaller; keep the minimum
            seed = s;
            found = true;
        }
    }
    if (!found) throw matrix_error("sylow_subgroup: no q-element found");

    LinearGroup syl = close({seed});
    while (syl.order() < qpart) {
        LinearGroup n = normalizer_in_group(g, syl);
        bool extended = false;
        for (const Matrix& m : n.elements) {
            if (syl.contains(m)) continue;
            if (!is_prime_power_of(element_order(m), q)) continue;
            std::vector<Matrix> gens = syl.generators;
            gens.push_back(m);
            syl = close(gens);
            extended = true;
            break;  // n.elements is lex sorted, so this is the lex-least witness
        }
        if (!extended) throw matrix_error("sylow_subgroup: extension stalled");
    }
    return syl;
}

// ---------------------------------------------------------------------------
// Derived subgroups and the perfect core.
// ---------------------------------------------------------------------------

inline LinearGroup derived_subgroup(const LinearGroup& g) {
    std::vector<Matrix> gens;
    Matrix id = identity(g.d, g.p);
    for (const Matrix& a : g.generators)
        for (const Matrix& b : g.generators) {
            Matrix c = mat_mul(mat_mul(mat_inv(a), mat_inv(b)), mat_mul(a, b));
            if (c != id) gens.push_back(c);
        }
    if (gens.empty()) gens.push_back(id);
    LinearGroup h = close(gens, g.order());
    // normal closure under conjugation by the generators of g
    for (;;) {
        bool grew = false;
        for (const Matrix& s : g.generators) {
            Matrix sinv = mat_inv(s);
            for (const Matrix& hg : std::vector<Matrix>(h.generators)) {
                Matrix c = mat_mul(sinv, mat_mul(hg, s));
                if (!h.contains(c)) {
                    std::vector<Matrix> ng = h.generators;
                    ng.push_back(c);
                    h = close(ng, g.order());
                    grew = true;
                }
            }
        }
        if (!grew) break;
    }
    return h;
}

/// Last term of the derived series.
inline LinearGroup perfect_core(const LinearGroup& g) {
    LinearGroup cur = g;
    for (;;) {
        LinearGroup nxt = derived_subgroup(cur);
        if (nxt.order() == cur.order()) return cur;
        cur = std::move(nxt);
    }
}

// ---------------------------------------------------------------------------
// Subgroups between a normal subgroup and its normalizer, via the quotient.
// ---------------------------------------------------------------------------

/// All subgroups h with g0 <= h <= n, where g0 is normal in n. Enumerated
/// through the subgroup lattice of the quotient n/g0; results are sorted by
/// order, then by element list.
inline std::vector<LinearGroup> intermediate_subgroups(const LinearGroup& n,
                                                       const LinearGroup& g0) {
    for (const Matrix& m : g0.elements)
        if (!n.contains(m)) throw matrix_error("intermediate_subgroups: g0 not inside n");
    for (const Matrix& t : n.generators)
        for (const Matrix& s : g0.generators)
            if (!g0.contains(mat_mul(mat_inv(t), mat_mul(s, t))))
                throw matrix_error("intermediate_subgroups: g0 not normal in n");

    // cosets of g0 in n, named by the lex-least coset member
    std::unordered_map<Matrix, int, MatrixHash> coset_id;
    std::vector<Matrix> coset_rep;
    std::vector<int> elem_coset(n.elements.size(), -1);
    for (size_t i = 0; i < n.elements.size(); ++i) {
        if (elem_coset[i] >= 0) continue;
        const Matrix& x = n.elements[i];
        Matrix rep = x;
        std::vector<int> members;
        for (const Matrix& s : g0.elements) {
            Matrix y = mat_mul(s, x);
            int yi = n.element_index(y);
            members.push_back(yi);
            if (y < rep) rep = y;
        }
        int id = static_cast<int>(coset_rep.size());
        coset_rep.push_back(rep);
        coset_id.emplace(rep, id);
        for (int yi : members) elem_coset[yi] = id;
    }
    const int nc = static_cast<int>(coset_rep.size());

    // quotient multiplication table
    std::vector<std::vector<int>> qmul(nc, std::vector<int>(nc));
    for (int i = 0; i < nc; ++i)
        for (int j = 0; j < nc; ++j)
            qmul[i][j] = elem_coset[n.element_index(mat_mul(coset_rep[i], coset_rep[j]))];
    int qid = elem_coset[n.element_index(identity(n.d, n.p))];

    auto qclose = [&](std::vector<int> seed) {
        std::vector<char> in(nc, 0);
        std::vector<int> members{qid};
        in[qid] = 1;
        for (int s : seed)
            if (!in[s]) {
                in[s] = 1;
                members.push_back(s);
            }
        for (size_t i = 0; i < members.size(); ++i)
            for (size_t j = 0; j < members.size(); ++j) {
                int prod = qmul[members[i]][members[j]];
                if (!in[prod]) {
                    in[prod] = 1;
                    members.push_back(prod);
                }
            }
        std::sort(members.begin(), members.end());
        return members;
    };

    std::set<std::vector<int>> found;
    std::vector<std::vector<int>> work;
    auto trivial = qclose({});
    found.insert(trivial);
    work.push_back(trivial);
    for (size_t i = 0; i < work.size(); ++i) {
        std::vector<int> cur = work[i];
        for (int c = 0; c < nc; ++c) {
            if (std::binary_search(cur.begin(), cur.end(), c)) continue;
            std::vector<int> seed = cur;
            seed.push_back(c);
            auto sub = qclose(seed);
            if (found.insert(sub).second) work.push_back(sub);
        }
    }

    std::vector<LinearGroup> result;
    for (const auto& sub : found) {
        std::vector<Matrix> elems;
        for (size_t i = 0; i < n.elements.size(); ++i)
            if (std::binary_search(sub.begin(), sub.end(), elem_coset[i]))
                elems.push_back(n.elements[i]);
        result.push_back(group_from_elements(std::move(elems)));
    }
    std::sort(result.begin(), result.end(), [](const LinearGroup& a, const LinearGroup& b) {
        if (a.order() != b.order()) return a.order() < b.order();
        return a.elements < b.elements;
    });
    return result;
}

}  // namespace qf

#endif
