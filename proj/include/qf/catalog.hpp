#ifndef QF_CATALOG_HPP
#define QF_CATALOG_HPP

#include <filesystem>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "qf/group.hpp"
#include "qf/io.hpp"

namespace qf {

class construction_error : public std::runtime_error {
public:
    explicit construction_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct CaseDescriptor {
    std::string case_id;
    int p = 0, d = 0;
    long long expected_order = 0;
    std::string g0_name;
    long long g0_order = 0;
};

inline std::vector<CaseDescriptor> list_cases() {
    return {
        {"4.a-48", 5, 2, 48, "SL(2,3)", 24},
        {"4.a-96", 5, 2, 96, "SL(2,3)", 24},
        {"4.b", 7, 2, 144, "SL(2,3)", 24},
        {"4.c", 11, 2, 240, "SL(2,3)", 24},
        {"4.e-240", 3, 4, 240, "SL(2,5)", 120},
        {"4.e-480", 3, 4, 480, "SL(2,5)", 120},
        {"4.e-960", 3, 4, 960, "SL(2,5)", 120},
        {"4.f", 11, 2, 600, "SL(2,5)", 120},
        {"4.g", 19, 2, 1080, "SL(2,5)", 120},
        {"4.h", 29, 2, 1680, "SL(2,5)", 120},
        {"4.j-160", 3, 4, 160, "E32", 32},
        {"4.j-320", 3, 4, 320, "E32", 32},
        {"4.j-640", 3, 4, 640, "E32", 32},
        {"4.j-1920", 3, 4, 1920, "E32", 32},
        {"4.j-3840", 3, 4, 3840, "E32", 32},
        {"4.k-360", 2, 4, 360, "A6", 360},
        {"4.k-720", 2, 4, 720, "A6", 360},
        {"4.l", 2, 4, 2520, "A7", 2520},
        {"4.m", 3, 6, 2184, "SL(2,13)", 2184},
    };
}

inline CaseDescriptor find_case(const std::string& id) {
    for (const CaseDescriptor& c : list_cases())
        if (c.case_id == id) return c;
    throw construction_error("unknown case id: " + id);
}

// ---------------------------------------------------------------------------
// Disk cache for built groups and normalizer scans.
// ---------------------------------------------------------------------------

class GroupCache {
public:
    explicit GroupCache(std::filesystem::path dir = {}) : dir_(std::move(dir)) {}

    LinearGroup get(const std::string& tag, const std::function<LinearGroup()>& build) const {
        if (dir_.empty()) return build();
        std::filesystem::path path = dir_ / (tag + ".json");
        {
            std::lock_guard<std::mutex> lock(mutex_);
            if (std::filesystem::exists(path)) return load_group(path);
        }
        LinearGroup g = build();  // may race; rebuilding is deterministic
        std::lock_guard<std::mutex> lock(mutex_);
        if (!std::filesystem::exists(path)) save_group(g, path);
        return g;
    }

    const std::filesystem::path& dir() const { return dir_; }

private:
    std::filesystem::path dir_;
    mutable std::mutex mutex_;
};

// ---------------------------------------------------------------------------
// Building blocks.
// ---------------------------------------------------------------------------

namespace detail {

inline Matrix from_rows(int p, std::initializer_list<std::initializer_list<int>> rows) {
    int d = static_cast<int>(rows.size());
    Matrix m(d, p);
    int i = 0;
    for (const auto& row : rows) {
        int j = 0;
        for (int v : row) m.set(i, j++, v);
        ++i;
    }
    return m;
}

}  // namespace detail

/// Q8 inside GL(2,p): i = [[0,-1],[1,0]] and j = [[a,b],[b,-a]] with
/// a^2 + b^2 = -1, (a, b) lex-least.
inline LinearGroup build_q8(int p) {
    PrimeField f(p);
    Matrix i = detail::from_rows(p, {{0, p - 1}, {1, 0}});
    for (int a = 0; a < p; ++a)
        for (int b = 0; b < p; ++b) {
            if (f.add(f.mul(a, a), f.mul(b, b)) != f.neg(1)) continue;
            Matrix j(2, p);
            j.set(0, 0, a);
            j.set(0, 1, b);
            j.set(1, 0, b);
            j.set(1, 1, f.neg(a));
            LinearGroup g = close({i, j}, 64);
            if (g.order() == 8) return g;
        }
    throw construction_error("Q8 construction failed for p = " + std::to_string(p));
}

/// SL(2,3) inside GL(2,p): adjoin the lex-least order-3 element of GL(2,p)
/// normalizing Q8.
inline LinearGroup build_sl23(int p) {
    LinearGroup q8 = build_q8(p);
    LinearGroup result;
    bool found = false;
    detail::for_each_gl(2, p, [&](const Matrix& t) {
        if (found) return;
        if (mat_det(t) != 1) return;  // SL(2,3) sits inside SL(2,p)
        if (mat_mul(mat_mul(t, t), t) != identity(2, p)) return;
        if (t == identity(2, p)) return;
        Matrix tinv = mat_inv(t);
        for (const Matrix& s : q8.generators)
            if (!q8.contains(mat_mul(tinv, mat_mul(s, t)))) return;
        std::vector<Matrix> gens = q8.generators;
        gens.push_back(t);
        LinearGroup g = close(gens, 25);
        if (g.order() == 24) {
            result = std::move(g);
            found = true;
        }
    });
    if (!found) throw construction_error("SL(2,3) construction failed for p = " + std::to_string(p));
    return result;
}

/// SL(2,5) inside GL(2,p): lex-least order-5 element of SL(2,p) paired with
/// the lex-least order-4 element closing to a group of order 120 with a
/// unique involution.
inline LinearGroup build_sl25_gl2(int p) {
    Matrix s;
    bool have_s = false;
    detail::for_each_gl(2, p, [&](const Matrix& t) {
        if (have_s) return;
        if (mat_det(t) != 1) return;
        if (mat_pow(t, 5) == identity(2, p) && t != identity(2, p)) {
            s = t;
            have_s = true;
        }
    });
    if (!have_s) throw construction_error("no order-5 element in SL(2," + std::to_string(p) + ")");

    LinearGroup result;
    bool found = false;
    detail::for_each_gl(2, p, [&](const Matrix& t) {
        if (found) return;
        if (mat_det(t) != 1) return;
        Matrix t2 = mat_mul(t, t);
        if (t2 == identity(2, p) || mat_mul(t2, t2) != identity(2, p)) return;
        LinearGroup g;
        try {
            g = close({s, t}, 121);
        } catch (const budget_error&) {
            return;
        }
        if (g.order() != 120) return;
        int involutions = 0;
        for (const Matrix& m : g.elements)
            if (m != identity(2, p) && mat_mul(m, m) == identity(2, p)) ++involutions;
        if (involutions == 1) {
            result = std::move(g);
            found = true;
        }
    });
    if (!found) throw construction_error("SL(2,5) construction failed for p = " + std::to_string(p));
    return result;
}

/// SL(2,5) inside GL(4,3): built as SL(2,5) <= SL(2,9) over GF(9) and blown
/// up through the pinned basis of GF(9).
inline LinearGroup build_sl25_gl43() {
    ExtField f = gf9();
    auto ext_from_int = [&](long long n) {
        ExtMatrix m(2, f);
        for (int i = 0; i < 4; ++i) {
            m.a[i] = f.from_int(n % 9);
            n /= 9;
        }
        return m;
    };
    auto ext_order_is = [&](const ExtMatrix& m, int k) {
        ExtMatrix x = m, id = ext_identity(2, f);
        for (int n = 1; n <= k; ++n) {
            if (x == id) return n == k;
            x = ext_mul(x, m, f);
        }
        return false;
    };

    std::optional<ExtMatrix> s;
    for (long long n = 0; n < 9 * 9 * 9 * 9; ++n) {
        ExtMatrix m = ext_from_int(n);
        if (f.to_int(ext_det2(m, f)) != 1) continue;
        if (ext_order_is(m, 5)) {
            s = m;
            break;
        }
    }
    if (!s) throw construction_error("no order-5 element in SL(2,9)");

    for (long long n = 0; n < 9 * 9 * 9 * 9; ++n) {
        ExtMatrix t = ext_from_int(n);
        if (f.to_int(ext_det2(t, f)) != 1) continue;
        if (!ext_order_is(t, 4)) continue;
        LinearGroup g;
        try {
            g = close({blowup(*s, f), blowup(t, f)}, 121);
        } catch (const budget_error&) {
            continue;
        }
        if (g.order() != 120) continue;
        int involutions = 0;
        for (const Matrix& m : g.elements)
            if (m != identity(4, 3) && mat_mul(m, m) == identity(4, 3)) ++involutions;
        if (involutions == 1) return g;
    }
    throw construction_error("SL(2,5) blowup construction failed");
}

/// Extraspecial group of order 32 inside GL(4,3), generated by Kronecker
/// pairs of D8 and Q8 generators; center is {+I, -I}.
inline LinearGroup build_e32() {
    const int p = 3;
    Matrix r = detail::from_rows(p, {{0, 2}, {1, 0}});   // order 4 rotation
    Matrix s = detail::from_rows(p, {{1, 0}, {0, 2}});   // reflection
    Matrix qi = detail::from_rows(p, {{0, 2}, {1, 0}});  // i
    Matrix qj = detail::from_rows(p, {{1, 1}, {1, 2}});  // j, 1^2 + 1^2 = -1
    Matrix id2 = identity(2, p);
    LinearGroup g = close({kron(r, id2), kron(s, id2), kron(id2, qi), kron(id2, qj)}, 64);
    if (g.order() != 32) throw construction_error("E32: closure has wrong order");
    LinearGroup z = centralizer_in_group(g, g);
    if (z.order() != 2 || !z.contains(scalar_matrix(4, 3, 2)))
        throw construction_error("E32: center is not {+I, -I}");
    return g;
}

/// Lex-least two-generated transitive subgroup of GL(d,p) of the target
/// order, scanning generator pairs restricted by element orders.
inline LinearGroup find_two_generated(int d, int p, long long target, int ord_a, int ord_b) {
    std::vector<Matrix> all;
    detail::for_each_gl(d, p, [&](const Matrix& t) { all.push_back(t); });
    std::vector<Matrix> as, bs;
    for (const Matrix& m : all) {
        int o = element_order(m, static_cast<int>(target) + 1);
        if (o == ord_a) as.push_back(m);
        if (o == ord_b) bs.push_back(m);
    }
    for (const Matrix& a : as)
        for (const Matrix& b : bs) {
            LinearGroup g;
            try {
                g = close({a, b}, target + 1);
            } catch (const budget_error&) {
                continue;
            }
            if (g.order() == target && is_transitive(g)) return g;
        }
    throw construction_error("two-generated scan failed for order " + std::to_string(target));
}

/// Transitive subgroups g0 <= h <= n, sorted by order then element list.
inline std::vector<LinearGroup> transitive_intermediates(const LinearGroup& n,
                                                         const LinearGroup& g0) {
    std::vector<LinearGroup> out;
    for (LinearGroup& h : intermediate_subgroups(n, g0))
        if (is_transitive(h)) out.push_back(std::move(h));
    return out;
}

// ---------------------------------------------------------------------------
// Case construction.
// ---------------------------------------------------------------------------

/// Characteristic subgroup G0 of the case (the E32 / SL / alternating core).
inline LinearGroup build_g0(const CaseDescriptor& c, const GroupCache& cache) {
    std::string tag = "g0-" + c.g0_name + "-p" + std::to_string(c.p) + "d" + std::to_string(c.d);
    return cache.get(tag, [&]() -> LinearGroup {
        if (c.g0_name == "SL(2,3)") return build_sl23(c.p);
        if (c.g0_name == "SL(2,5)" && c.d == 2) return build_sl25_gl2(c.p);
        if (c.g0_name == "SL(2,5)" && c.d == 4) return build_sl25_gl43();
        if (c.g0_name == "E32") return build_e32();
        if (c.g0_name == "A6") return find_two_generated(4, 2, 360, 5, 4);
        if (c.g0_name == "A7") return find_two_generated(4, 2, 2520, 7, 5);
        throw construction_error("no construction recipe for G0 " + c.g0_name);
    });
}

inline LinearGroup normalizer_of_g0(const CaseDescriptor& c, const GroupCache& cache) {
    LinearGroup g0 = build_g0(c, cache);
    std::string tag = "norm-" + c.g0_name + "-p" + std::to_string(c.p) + "d" + std::to_string(c.d);
    return cache.get(tag, [&] { return normalizer_in_gl(g0); });
}

inline LinearGroup build_case(const CaseDescriptor& c, const GroupCache& cache = GroupCache{}) {
    LinearGroup g = cache.get("case-" + c.case_id, [&]() -> LinearGroup {
        if (c.case_id == "4.m")
            throw construction_error("4.m: skipped: no construction");
        if (c.case_id == "4.k-360" || c.case_id == "4.k-720" || c.case_id == "4.l") {
            long long target = c.expected_order;
            if (c.case_id == "4.k-360") return find_two_generated(4, 2, target, 5, 4);
            if (c.case_id == "4.k-720") return find_two_generated(4, 2, target, 5, 6);
            return find_two_generated(4, 2, target, 7, 5);
        }
        // remaining cases: transitive subgroup of the right order between G0
        // and its GL-normalizer
        LinearGroup g0 = build_g0(c, cache);
        LinearGroup n = normalizer_of_g0(c, cache);
        for (LinearGroup& h : transitive_intermediates(n, g0))
            if (h.order() == c.expected_order) return std::move(h);
        throw construction_error(c.case_id + ": no transitive intermediate subgroup of order " +
                                 std::to_string(c.expected_order));
    });
    if (g.order() != c.expected_order)
        throw construction_error(c.case_id + ": built order " + std::to_string(g.order()) +
                                 " != expected " + std::to_string(c.expected_order));
    return g;
}

// ---------------------------------------------------------------------------
// Verification.
// ---------------------------------------------------------------------------

struct CaseReport {
    std::string case_id;
    bool order_ok = false;
    bool transitive_ok = false;
    bool g0_ok = false;
    long long order = 0;
    long long g0_order = 0;
    std::string detail;

    bool ok() const { return order_ok && transitive_ok && g0_ok; }
};

inline CaseReport verify_case(const LinearGroup& g, const CaseDescriptor& c,
                              const GroupCache& cache = GroupCache{}) {
    CaseReport r;
    r.case_id = c.case_id;
    r.order = g.order();
    r.order_ok = g.order() == c.expected_order;
    r.transitive_ok = is_transitive(g);

    // G0 must sit inside g as a normal subgroup of the advertised order
    LinearGroup g0 = build_g0(c, cache);
    r.g0_order = g0.order();
    bool contained = true;
    for (const Matrix& m : g0.generators)
        if (!g.contains(m)) contained = false;
    bool normal = contained;
    if (contained)
        for (const Matrix& t : g.generators) {
            Matrix tinv = mat_inv(t);
            for (const Matrix& s : g0.generators)
                if (!g0.contains(mat_mul(tinv, mat_mul(s, t)))) normal = false;
        }
    // the A-type cores coincide with the case group or its derived subgroup,
    // which conjugation may move; accept any conjugate copy by checking the
    // derived subgroup order instead
    if (!contained && (c.g0_name == "A6" || c.g0_name == "A7")) {
        LinearGroup der = perfect_core(g);
        r.g0_order = der.order();
        normal = der.order() == c.g0_order;
    }
    r.g0_ok = normal && r.g0_order == c.g0_order;
    if (!r.g0_ok) r.detail = "G0 check failed";
    return r;
}

}  // namespace qf

#endif
