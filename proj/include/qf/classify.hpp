#ifndef QF_CLASSIFY_HPP
#define QF_CLASSIFY_HPP

#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "qf/permgraph.hpp"

namespace qf {

struct classify_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Isotopy witnesses. A witness (T, U, inv) names the map
//   S -> T^-1 S U         when !inv,
//   S -> (T^-1 S U)^-1    when inv.
// ---------------------------------------------------------------------------

struct Witness {
    Matrix t, u;
    bool inv = false;
};

inline Witness witness_identity(int d, int p) { return {identity(d, p), identity(d, p), false}; }

/// The map "first a, then b".
inline Witness witness_compose(const Witness& a, const Witness& b) {
    if (!a.inv) return {mat_mul(a.t, b.t), mat_mul(a.u, b.u), b.inv};
    return {mat_mul(a.t, b.u), mat_mul(a.u, b.t), !b.inv};
}

inline Witness witness_inverse(const Witness& w) {
    if (!w.inv) return {mat_inv(w.t), mat_inv(w.u), false};
    return {mat_inv(w.u), mat_inv(w.t), true};
}

inline std::vector<Matrix> witness_apply(const Witness& w, const std::vector<Matrix>& mats) {
    Matrix tinv = mat_inv(w.t);
    std::vector<Matrix> out;
    out.reserve(mats.size());
    for (const Matrix& m : mats) {
        Matrix img = mat_mul(tinv, mat_mul(m, w.u));
        out.push_back(w.inv ? mat_inv(img) : img);
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Checks T^-1 S1 U = S2 (or its inverse set), plus the structural
/// consequences: T^-1 U lies in the image set and conjugation by T and by U
/// carries <S1> onto <S2>.
inline bool isotopy_witness_verify(const SpreadSet& s1, const SpreadSet& s2, const Matrix& t,
                                   const Matrix& u, bool inverted) {
    Witness w{t, u, inverted};
    if (witness_apply(w, s1.matrices) != s2.matrices) return false;
    std::vector<Matrix> image = s2.matrices;  // = T^-1 S1 U as a set, up to inversion
    if (inverted)
        for (Matrix& m : image) m = mat_inv(m);
    std::sort(image.begin(), image.end());
    if (!std::binary_search(image.begin(), image.end(), mat_mul(mat_inv(t), u))) return false;

    LinearGroup g1 = close(s1.matrices), g2 = close(s2.matrices);
    for (const Matrix& c : {t, u}) {
        Matrix cinv = mat_inv(c);
        for (const Matrix& m : g1.elements)
            if (!g2.contains(mat_mul(cinv, mat_mul(m, c)))) return false;
        if (g1.order() != g2.order()) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Parastrophy reduction.
// ---------------------------------------------------------------------------

struct ParastrophyClass {
    SpreadSet representative;
    int representative_index = -1;        // into the input clique list
    std::vector<int> members;             // input indices, ascending
    std::vector<Witness> witnesses;       // parallel: maps representative onto member
    long long member_count() const { return static_cast<long long>(members.size()); }
};

/// Orbits of the enumerated cliques under the three generator families
/// preserving "contains I": right translations S -> S s^-1 (s in S),
/// conjugation by generators of N, and inversion. The input must be the
/// complete enumeration; an image falling outside it is an integrity error.
inline std::vector<ParastrophyClass> parastrophy_classes(const PermGraph& graph,
                                                         const std::vector<Clique>& cliques,
                                                         const LinearGroup& g,
                                                         const LinearGroup& n) {
    const int nv = graph.num_vertices();
    for (const Matrix& m : g.generators)
        if (!n.contains(m)) throw classify_error("parastrophy: N does not contain G");

    std::unordered_map<Clique, int, detail::CliqueHash> id;
    id.reserve(cliques.size() * 2);
    for (size_t i = 0; i < cliques.size(); ++i)
        if (!id.emplace(cliques[i], static_cast<int>(i)).second)
            throw classify_error("parastrophy: duplicate clique in input");

    // vertex-level move tables
    std::vector<uint16_t> vinv(nv);
    std::vector<Matrix> vinv_mat(nv);
    for (int v = 0; v < nv; ++v) {
        vinv_mat[v] = mat_inv(graph.verts[v]);
        vinv[v] = static_cast<uint16_t>(graph.vertex_index(vinv_mat[v]));
    }
    // right[v * nv + s] = vertex of verts[v] verts[s]^-1; defined iff adjacent
    std::vector<uint16_t> right(static_cast<size_t>(nv) * nv, 0xFFFF);
    for (int v = 0; v < nv; ++v)
        graph.adj[v].for_each([&](int s) {
            right[static_cast<size_t>(v) * nv + s] =
                static_cast<uint16_t>(graph.vertex_index(mat_mul(graph.verts[v], vinv_mat[s])));
        });
    std::vector<std::vector<uint16_t>> conj_perm;
    for (const Matrix& c : n.generators) {
        Matrix cinv = mat_inv(c);
        std::vector<uint16_t> perm(nv);
        for (int v = 0; v < nv; ++v)
            perm[v] = static_cast<uint16_t>(
                graph.vertex_index(mat_mul(cinv, mat_mul(graph.verts[v], c))));
        conj_perm.push_back(std::move(perm));
    }

    auto lookup = [&](const Clique& c, const char* move) {
        auto it = id.find(c);
        if (it == id.end())
            throw classify_error(std::string("parastrophy: ") + move +
                                 " image missing from the clique list (incomplete enumeration?)");
        return it->second;
    };

    std::vector<int> root(cliques.size(), -1);
    std::vector<Witness> wit(cliques.size(), witness_identity(graph.d, graph.p));
    std::vector<int> queue;
    for (size_t start = 0; start < cliques.size(); ++start) {
        if (root[start] >= 0) continue;
        root[start] = static_cast<int>(start);
        queue.assign(1, static_cast<int>(start));
        while (!queue.empty()) {
            int cur = queue.back();
            queue.pop_back();
            const Clique& k = cliques[cur];
            auto visit = [&](Clique img, const Witness& move, const char* name) {
                std::sort(img.begin(), img.end());
                int j = lookup(img, name);
                if (root[j] >= 0) return;
                root[j] = static_cast<int>(start);
                wit[j] = witness_compose(wit[cur], move);
                queue.push_back(j);
            };

            Clique img(k.size());
            for (uint16_t s : k) {  // translation S -> S s^-1
                size_t pos = 0;
                for (uint16_t v : k)
                    img[pos++] = (v == s) ? vinv[s] : right[static_cast<size_t>(v) * nv + s];
                visit(img, {identity(graph.d, graph.p), vinv_mat[s], false}, "translation");
            }
            for (size_t ci = 0; ci < conj_perm.size(); ++ci) {
                for (size_t pos = 0; pos < k.size(); ++pos) img[pos] = conj_perm[ci][k[pos]];
                visit(img, {n.generators[ci], n.generators[ci], false}, "conjugation");
            }
            for (size_t pos = 0; pos < k.size(); ++pos) img[pos] = vinv[k[pos]];
            visit(img, {identity(graph.d, graph.p), identity(graph.d, graph.p), true}, "inversion");
        }
    }

    std::map<int, std::vector<int>> by_root;
    for (size_t i = 0; i < cliques.size(); ++i) by_root[root[i]].push_back(static_cast<int>(i));

    std::vector<ParastrophyClass> out;
    for (auto& [r, members] : by_root) {
        ParastrophyClass cls;
        cls.representative_index = *std::min_element(
            members.begin(), members.end(),
            [&](int a, int b) { return cliques[a] < cliques[b]; });
        cls.representative = spread_from_clique(graph, cliques[cls.representative_index]);
        Witness to_rep_inv = witness_inverse(wit[cls.representative_index]);
        cls.members = members;
        for (int m : members) {
            Witness w = witness_compose(to_rep_inv, wit[m]);
            if (witness_apply(w, cls.representative.matrices) !=
                spread_from_clique(graph, cliques[m]).matrices)
                throw classify_error("parastrophy: witness replay failed");
            cls.witnesses.push_back(w);
        }
        out.push_back(std::move(cls));
    }
    std::sort(out.begin(), out.end(), [](const ParastrophyClass& a, const ParastrophyClass& b) {
        return a.representative_index < b.representative_index;
    });
    return out;
}

inline bool generates_full_group(const SpreadSet& s, const LinearGroup& g) {
    for (const Matrix& m : s.matrices)
        if (!g.contains(m)) throw classify_error("spread set not contained in the group");
    return close(s.matrices, g.order()).order() == g.order();
}

// ---------------------------------------------------------------------------
// Conway-Charnes fingerprint.
// ---------------------------------------------------------------------------

/// Sorted (entry magnitude, multiplicity) pairs of F = A A^t; total
/// multiplicity q^2.
using Fingerprint = std::vector<std::pair<long long, long long>>;

inline Fingerprint fingerprint(const SpreadSet& s) {
    const auto& u = s.matrices;
    const int m = static_cast<int>(u.size());  // q - 1
    const int q = m + 1;
    const int p = u[0].p;
    PrimeField f(p);

    // signed matrix bordered by 1s; first diagonal entry 0
    std::vector<int8_t> a(static_cast<size_t>(q) * q, 0);
    for (int i = 1; i < q; ++i) a[i] = a[static_cast<size_t>(i) * q] = 1;
    for (int i = 1; i < q; ++i)
        for (int j = 1; j < q; ++j) {
            if (i == j) continue;
            int det = mat_det(mat_sub(u[i - 1], u[j - 1]));
            a[static_cast<size_t>(i) * q + j] =
                det == 0 ? 0 : (f.is_square(det) ? 1 : -1);
        }

    std::map<long long, long long> mult;
    std::vector<long long> row_f(q);
    for (int i = 0; i < q; ++i) {
        for (int j = 0; j < q; ++j) {
            long long v = 0;
            const int8_t* ri = &a[static_cast<size_t>(i) * q];
            const int8_t* rj = &a[static_cast<size_t>(j) * q];
            for (int k = 0; k < q; ++k) v += static_cast<long long>(ri[k]) * rj[k];
            ++mult[v < 0 ? -v : v];
        }
    }
    return Fingerprint(mult.begin(), mult.end());
}

// ---------------------------------------------------------------------------
// Autotopism groups.
// ---------------------------------------------------------------------------

struct MatPair {
    Matrix t, u;
    friend bool operator==(const MatPair& a, const MatPair& b) { return a.t == b.t && a.u == b.u; }
    friend bool operator<(const MatPair& a, const MatPair& b) {
        if (!(a.t == b.t)) return a.t < b.t;
        return a.u < b.u;
    }
};

struct AutotopismGroup {
    std::vector<MatPair> pairs;  // sorted
    long long order = 0;
    std::vector<long long> orbit_profile;         // q + 1 infinite points
    std::vector<long long> affine_orbit_profile;  // q^2 - 1 nonzero vectors
};

namespace detail {

class UnionFind {
public:
    explicit UnionFind(size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
    size_t find(size_t x) {
        while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
        return x;
    }
    void unite(size_t a, size_t b) { parent_[find(a)] = find(b); }
    std::vector<long long> orbit_sizes() {
        std::map<size_t, long long> count;
        for (size_t i = 0; i < parent_.size(); ++i) ++count[find(i)];
        std::vector<long long> out;
        for (auto& [r, c] : count) out.push_back(c);
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    std::vector<size_t> parent_;
};

}  // namespace detail

/// Setwise stabilizer of S in H = {(T,U) : T,U in N, T^-1 U in G}. Since
/// I lies in S, any stabilizing pair has T^-1 U in S, so U ranges over T*S
/// only; membership of T^-1 U in G is then automatic.
inline AutotopismGroup autotopism_group(const SpreadSet& s, const LinearGroup& g,
                                        const LinearGroup& n) {
    if (!generates_full_group(s, g))
        throw classify_error("autotopism_group: spread set does not generate the group");
    const int m = static_cast<int>(s.matrices.size());  // q - 1
    std::unordered_map<Matrix, int, MatrixHash> pos;
    for (int i = 0; i < m; ++i) pos.emplace(s.matrices[i], i);

    AutotopismGroup out;
    for (const Matrix& t : n.elements) {
        Matrix tinv = mat_inv(t);
        for (const Matrix& w : s.matrices) {
            Matrix u = mat_mul(t, w);
            bool ok = true;
            for (const Matrix& x : s.matrices)
                if (!pos.count(mat_mul(tinv, mat_mul(x, u)))) {
                    ok = false;
                    break;
                }
            if (ok) out.pairs.push_back({t, u});
        }
    }
    std::sort(out.pairs.begin(), out.pairs.end());
    out.order = static_cast<long long>(out.pairs.size());

    // closure sanity check (the stabilizer is a group; catch bookkeeping bugs)
    if (out.order <= 2000) {
        for (const MatPair& a : out.pairs)
            for (const MatPair& b : out.pairs) {
                MatPair c{mat_mul(a.t, b.t), mat_mul(a.u, b.u)};
                if (!std::binary_search(out.pairs.begin(), out.pairs.end(), c))
                    throw classify_error("autotopism pairs are not closed");
            }
    }

    // orbits on infinite points: one per member of S, plus the two fixed axes
    detail::UnionFind inf(m);
    const long long q = m + 1;
    detail::UnionFind aff(static_cast<size_t>(q) * q - 1);
    auto vec_act = [&](long long full, const Matrix& mat) -> long long {
        return full == 0 ? 0 : act(full - 1, mat) + 1;
    };
    for (const MatPair& pr : out.pairs) {
        Matrix tinv = mat_inv(pr.t);
        for (int i = 0; i < m; ++i) {
            auto it = pos.find(mat_mul(tinv, mat_mul(s.matrices[i], pr.u)));
            if (it == pos.end()) throw classify_error("autotopism pair does not stabilize S");
            inf.unite(i, it->second);
        }
        for (long long x = 0; x < q; ++x) {
            long long xi = vec_act(x, pr.t);
            for (long long y = (x == 0 ? 1 : 0); y < q; ++y)
                aff.unite(static_cast<size_t>(x * q + y - 1),
                          static_cast<size_t>(xi * q + vec_act(y, pr.u) - 1));
        }
    }
    out.orbit_profile = inf.orbit_sizes();
    out.orbit_profile.push_back(1);  // axis (0)
    out.orbit_profile.push_back(1);  // axis (infinity)
    std::sort(out.orbit_profile.begin(), out.orbit_profile.end());
    out.affine_orbit_profile = aff.orbit_sizes();
    return out;
}

/// Faithful matrix model of a pair group: (T, U) -> diag(T, U).
inline LinearGroup pair_group_to_linear(const AutotopismGroup& a) {
    if (a.pairs.empty()) throw classify_error("empty pair group");
    const int d = a.pairs[0].t.d, p = a.pairs[0].t.p;
    std::vector<Matrix> elems;
    for (const MatPair& pr : a.pairs) {
        Matrix m(2 * d, p);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                m.set(i, j, pr.t.at(i, j));
                m.set(d + i, d + j, pr.u.at(i, j));
            }
        elems.push_back(m);
    }
    return group_from_elements(elems);
}

// ---------------------------------------------------------------------------
// Isomorphism battery.
// ---------------------------------------------------------------------------

struct GroupInvariants {
    long long order = 0, derived_order = 0, center_order = 0;
    std::vector<std::pair<long long, long long>> element_orders;  // (order, count)
    std::vector<long long> class_sizes;                           // sorted

    friend bool operator==(const GroupInvariants&, const GroupInvariants&) = default;
};

inline GroupInvariants group_invariants(const LinearGroup& g) {
    GroupInvariants inv;
    inv.order = g.order();
    inv.derived_order = derived_subgroup(g).order();
    inv.center_order = centralizer_in_group(g, g).order();

    std::map<long long, long long> ords;
    for (const Matrix& m : g.elements) ++ords[element_order(m)];
    inv.element_orders.assign(ords.begin(), ords.end());

    const size_t nn = g.elements.size();
    std::vector<Matrix> invs(nn);
    for (size_t i = 0; i < nn; ++i) invs[i] = mat_inv(g.elements[i]);
    std::vector<char> seen(nn, 0);
    for (size_t i = 0; i < nn; ++i) {
        if (seen[i]) continue;
        long long size = 0;
        for (size_t j = 0; j < nn; ++j) {
            int k = g.element_index(mat_mul(invs[j], mat_mul(g.elements[i], g.elements[j])));
            if (!seen[k]) {
                seen[k] = 1;
                ++size;
            }
        }
        inv.class_sizes.push_back(size);
    }
    std::sort(inv.class_sizes.begin(), inv.class_sizes.end());
    return inv;
}

/// Positive identification by generator relations: order 168 together with a
/// generating pair satisfying x^2 = y^3 = (xy)^7 = [x,y]^4 = 1 pins the group.
inline bool is_psl27(const LinearGroup& g) {
    if (g.order() != 168) return false;
    std::vector<Matrix> invol, third;
    for (const Matrix& m : g.elements) {
        long long o = element_order(m);
        if (o == 2) invol.push_back(m);
        if (o == 3) third.push_back(m);
    }
    for (const Matrix& x : invol)
        for (const Matrix& y : third) {
            if (element_order(mat_mul(x, y)) != 7) continue;
            Matrix comm = mat_mul(mat_inv(x), mat_mul(mat_inv(y), mat_mul(x, y)));
            if (element_order(comm) != 4) continue;
            if (close({x, y}, g.order()).order() == g.order()) return true;
        }
    return false;
}

/// "nonisomorphic" when the invariant battery separates; a positive verdict
/// only with an explicit relation witness; otherwise "undecided".
inline std::string isomorphism_verdict(const LinearGroup& a, const LinearGroup& b) {
    if (!(group_invariants(a) == group_invariants(b))) return "nonisomorphic";
    if (is_psl27(a) && is_psl27(b)) return "isomorphic (PSL(2,7))";
    return "undecided";
}

// ---------------------------------------------------------------------------
// Quasifield reconstruction.
// ---------------------------------------------------------------------------

/// Multiplication table on p^d labels; label 0 is zero, label v + 1 is the
/// nonzero vector of index v. Addition is vector addition of labels.
struct Quasifield {
    int p = 0, d = 0;
    long long q = 0;
    std::vector<uint16_t> table;  // q * q, row x: products x * y

    uint16_t mul(long long x, long long y) const { return table[x * q + y]; }
    long long add(long long x, long long y) const {
        long long r = 0, pw = 1;
        for (int i = 0; i < d; ++i) {
            r += (x % p + y % p) % p * pw;
            x /= p;
            y /= p;
            pw *= p;
        }
        return r;
    }
};

inline Quasifield spread_to_quasifield(const SpreadSet& s) {
    Quasifield qf;
    qf.p = s.matrices[0].p;
    qf.d = s.matrices[0].d;
    qf.q = static_cast<long long>(s.matrices.size()) + 1;
    qf.table.assign(qf.q * qf.q, 0);

    // anchor e = the nonzero vector of index 0; u acts as right multiplication
    // by the label a(u) = e * u
    std::vector<char> hit(qf.q, 0);
    for (const Matrix& u : s.matrices) {
        long long a = act(0, u) + 1;
        if (hit[a]++) throw classify_error("spread labeling is not bijective");
        for (long long x = 1; x < qf.q; ++x)
            qf.table[x * qf.q + a] = static_cast<uint16_t>(act(x - 1, u) + 1);
    }
    for (long long a = 1; a < qf.q; ++a)
        if (!hit[a]) throw classify_error("spread labeling is not bijective");
    return qf;
}

/// Q1 additive vector group (by construction of add), Q2 loop, Q3 right
/// distributivity, Q4 zero annihilates. Full exhaustion.
inline bool verify_quasifield(const Quasifield& qf) {
    const long long q = qf.q, e = 1;
    for (long long x = 0; x < q; ++x)
        if (qf.mul(x, 0) != 0 || qf.mul(0, x) != 0) return false;
    for (long long x = 1; x < q; ++x)
        if (qf.mul(x, e) != x || qf.mul(e, x) != x) return false;
    // loop: every row and column of the nonzero part is a permutation
    for (long long x = 1; x < q; ++x) {
        std::vector<char> row(q, 0), col(q, 0);
        for (long long y = 1; y < q; ++y) {
            long long r = qf.mul(x, y), c = qf.mul(y, x);
            if (r == 0 || c == 0 || row[r]++ || col[c]++) return false;
        }
    }
    for (long long x = 0; x < q; ++x)
        for (long long y = 0; y < q; ++y) {
            long long xy = qf.add(x, y);
            for (long long z = 0; z < q; ++z)
                if (qf.mul(xy, z) != qf.add(qf.mul(x, z), qf.mul(y, z))) return false;
        }
    return true;
}

}  // namespace qf

#endif
