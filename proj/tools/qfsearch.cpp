// qfsearch: command-line driver for the exceptional-group quasifield search.
//
// Subcommands:
//   catalog   build every case group and verify order / transitivity / core
//   search    enumerate sharply transitive sets as cliques, persist them
//   classify  parastrophy classes, fingerprints, autotopism groups
//   obstruct  non-existence certificates and the extraspecial pipeline
//   report    consolidated summary of previously written output files
//
// Exit status: 0 all requested work done and matching expectations,
// 1 mismatch or failure, 2 usage error.

#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "qf/catalog.hpp"
#include "qf/classify.hpp"
#include "qf/obstruct.hpp"

namespace fs = std::filesystem;
using qf::json;

namespace {

struct Options {
    std::vector<std::string> cases;
    std::string out = "out";
    std::string cache;
    std::string expectations = "data/expectations.json";
    std::string format = "csv";
    int threads = 1;
    long long budget_nodes = -1;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------------------
// Case selection: a selector matches a case id exactly or as a dash-prefix
// ("4.k" selects 4.k-360 and 4.k-720).
// ---------------------------------------------------------------------------

bool selector_matches(const std::string& sel, const std::string& id) {
    if (sel == id) return true;
    return id.size() > sel.size() && id.compare(0, sel.size(), sel) == 0 && id[sel.size()] == '-';
}

std::vector<qf::CaseDescriptor> select_cases(const std::vector<std::string>& selectors,
                                             const std::vector<std::string>& universe) {
    std::vector<qf::CaseDescriptor> out;
    for (const std::string& id : universe) {
        bool keep = selectors.empty();
        for (const std::string& sel : selectors) keep = keep || selector_matches(sel, id);
        if (keep) out.push_back(qf::find_case(id));
    }
    return out;
}

// Cases with a group construction and a feasible permutation graph.
std::vector<std::string> search_universe() {
    return {"4.a-48", "4.a-96", "4.b",     "4.c",     "4.e-240", "4.e-480", "4.e-960",
            "4.f",    "4.g",    "4.h",     "4.k-360", "4.k-720", "4.l"};
}

std::vector<std::string> catalog_universe() {
    std::vector<std::string> out;
    for (const qf::CaseDescriptor& c : qf::list_cases()) out.push_back(c.case_id);
    return out;
}

// ---------------------------------------------------------------------------
// Expectations file (optional): known counts to compare against.
// ---------------------------------------------------------------------------

struct Expectations {
    bool loaded = false;
    json data;

    const json* table_row(const std::string& id) const {
        if (!loaded || !data.contains("table")) return nullptr;
        auto it = data["table"].find(id);
        return it == data["table"].end() ? nullptr : &*it;
    }
    long long catalog_order(const std::string& id) const {
        if (!loaded || !data.contains("catalog_orders")) return -1;
        auto it = data["catalog_orders"].find(id);
        return it == data["catalog_orders"].end() ? -1 : it->get<long long>();
    }
    const json* obstruction(const std::string& id) const {
        if (!loaded || !data.contains("obstructions")) return nullptr;
        auto it = data["obstructions"].find(id);
        return it == data["obstructions"].end() ? nullptr : &*it;
    }
    const json* e32() const {
        if (!loaded || !data.contains("e32_pipeline")) return nullptr;
        return &data["e32_pipeline"];
    }
};

Expectations load_expectations(const std::string& path) {
    Expectations e;
    std::ifstream in(path);
    if (!in) {
        std::fprintf(stderr, "warning: expectations file %s not found; skipping comparisons\n",
                     path.c_str());
        return e;
    }
    in >> e.data;
    e.loaded = true;
    return e;
}

// ---------------------------------------------------------------------------
// Output writers: a row-oriented table serialized as CSV or a JSON array.
// ---------------------------------------------------------------------------

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

void write_table(const Table& t, const fs::path& base, const std::string& format) {
    fs::create_directories(base.parent_path());
    if (format == "csv") {
        std::ofstream out(base.string() + ".csv");
        for (size_t i = 0; i < t.header.size(); ++i)
            out << t.header[i] << (i + 1 < t.header.size() ? "," : "\n");
        for (const auto& row : t.rows)
            for (size_t i = 0; i < row.size(); ++i)
                out << row[i] << (i + 1 < row.size() ? "," : "\n");
    } else {
        json arr = json::array();
        for (const auto& row : t.rows) {
            json obj;
            for (size_t i = 0; i < t.header.size(); ++i) {
                // numeric columns stay numeric in JSON
                const std::string& v = row[i];
                char* end = nullptr;
                long long n = std::strtoll(v.c_str(), &end, 10);
                if (end && *end == '\0' && !v.empty())
                    obj[t.header[i]] = n;
                else
                    obj[t.header[i]] = v;
            }
            arr.push_back(obj);
        }
        std::ofstream out(base.string() + ".json");
        out << arr.dump(2) << "\n";
    }
}

void write_json(const json& j, const fs::path& path) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path);
    out << j.dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// Minimal parallel map: jobs pulled from an atomic counter. Per-case work is
// independent; the group cache is internally locked.
// ---------------------------------------------------------------------------

void run_jobs(int threads, int njobs, const std::function<void(int)>& job) {
    if (threads <= 1 || njobs <= 1) {
        for (int i = 0; i < njobs; ++i) job(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    std::mutex err_mutex;
    std::vector<std::string> errors;
    for (int t = 0; t < std::min(threads, njobs); ++t)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < njobs; i = next.fetch_add(1)) {
                try {
                    job(i);
                } catch (const std::exception& e) {
                    std::lock_guard<std::mutex> lock(err_mutex);
                    errors.emplace_back(e.what());
                }
            }
        });
    for (auto& t : pool) t.join();
    if (!errors.empty()) throw std::runtime_error(errors.front());
}

// ---------------------------------------------------------------------------
// Shared per-case machinery.
// ---------------------------------------------------------------------------

qf::LinearGroup case_normalizer(const qf::CaseDescriptor& c, const qf::LinearGroup& g,
                                const qf::GroupCache& cache) {
    return cache.get("ngl-" + c.case_id, [&] { return qf::normalizer_in_gl(g); });
}

fs::path clique_file(const fs::path& out, const std::string& id) {
    return out / ("cliques-" + id + ".jsonl");
}

void save_cliques(const fs::path& path, const std::string& id, const qf::PermGraph& graph,
                  const std::vector<qf::Clique>& cliques) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path);
    for (const qf::Clique& c : cliques) {
        json keys = json::array();
        for (uint16_t v : c) keys.push_back(qf::matrix_to_json(graph.verts[v]));
        json line;
        line["case_id"] = id;
        line["vertex_keys"] = keys;
        out << line.dump() << "\n";
    }
}

std::vector<qf::Clique> load_cliques(const fs::path& path, const qf::PermGraph& graph) {
    std::ifstream in(path);
    std::vector<qf::Clique> cliques;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json j = json::parse(line);
        qf::Clique c;
        for (const auto& key : j.at("vertex_keys"))
            c.push_back(static_cast<uint16_t>(
                graph.vertex_index(qf::matrix_from_json(key, graph.d, graph.p))));
        std::sort(c.begin(), c.end());
        cliques.push_back(std::move(c));
    }
    std::sort(cliques.begin(), cliques.end());
    return cliques;
}

// ---------------------------------------------------------------------------
// catalog
// ---------------------------------------------------------------------------

int cmd_catalog(const Options& opt) {
    auto cases = select_cases(opt.cases, catalog_universe());
    if (cases.empty()) {
        std::fprintf(stderr, "error: no case matches the given selectors\n");
        return 2;
    }
    Expectations exp = load_expectations(opt.expectations);
    qf::GroupCache cache(opt.cache);

    struct Row {
        std::string id, status;
        long long order = 0;
        bool ok = false, skipped = false;
    };
    std::vector<Row> rows(cases.size());

    run_jobs(opt.threads, static_cast<int>(cases.size()), [&](int i) {
        const qf::CaseDescriptor& c = cases[i];
        Row& r = rows[i];
        r.id = c.case_id;
        try {
            qf::LinearGroup g = qf::build_case(c, cache);
            qf::CaseReport rep = qf::verify_case(g, c, cache);
            r.order = rep.order;
            r.ok = rep.ok();
            long long want = exp.catalog_order(c.case_id);
            if (want >= 0 && want != rep.order) r.ok = false;
            r.status = r.ok ? "ok" : ("failed: " + (rep.detail.empty() ? "order" : rep.detail));
        } catch (const qf::construction_error& e) {
            std::string msg = e.what();
            if (msg.find("skipped") != std::string::npos) {
                r.skipped = true;
                r.status = "skipped: no construction";
            } else {
                r.status = std::string("failed: ") + msg;
            }
        }
    });

    Table t;
    t.header = {"case_id", "order", "status"};
    bool all_ok = true;
    for (const Row& r : rows) {
        std::printf("catalog %-8s order=%-5lld %s\n", r.id.c_str(), r.order, r.status.c_str());
        t.rows.push_back({r.id, std::to_string(r.order), r.status});
        if (!r.ok && !r.skipped) all_ok = false;
    }
    write_table(t, fs::path(opt.out) / "catalog", opt.format);
    return all_ok ? 0 : 1;
}

// ---------------------------------------------------------------------------
// search
// ---------------------------------------------------------------------------

int cmd_search(const Options& opt) {
    auto cases = select_cases(opt.cases, search_universe());
    if (cases.empty()) {
        std::fprintf(stderr, "error: no searchable case matches the given selectors\n");
        return 2;
    }
    Expectations exp = load_expectations(opt.expectations);
    qf::GroupCache cache(opt.cache);
    qf::CliqueSearchOptions sopt;
    sopt.node_budget = opt.budget_nodes;

    struct Row {
        std::string id;
        long long vertices = 0, cliques = 0;
        bool ok = true;
        std::string note;
    };
    std::vector<Row> rows(cases.size());

    run_jobs(opt.threads, static_cast<int>(cases.size()), [&](int i) {
        const qf::CaseDescriptor& c = cases[i];
        Row& r = rows[i];
        r.id = c.case_id;
        auto t0 = std::chrono::steady_clock::now();
        qf::LinearGroup g = qf::build_case(c, cache);
        qf::PermGraph graph = qf::build_graph(g);
        std::vector<qf::Clique> cliques = qf::enumerate_spread_cliques(graph, sopt);
        r.vertices = graph.num_vertices();
        r.cliques = static_cast<long long>(cliques.size());
        save_cliques(clique_file(opt.out, c.case_id), c.case_id, graph, cliques);

        // spot oracle: the first and last clique must be sharply transitive
        for (size_t k : {size_t{0}, cliques.size() - 1}) {
            if (cliques.empty()) break;
            auto s = qf::spread_from_clique(graph, cliques[k], c.case_id);
            if (!qf::verify_sharply_transitive(s.matrices)) {
                r.ok = false;
                r.note = "sharp transitivity oracle failed";
            }
        }
        const json* row = exp.table_row(c.case_id);
        long long want = row ? row->at("cliques").get<long long>()
                             : (exp.obstruction(c.case_id) ? 0 : -1);
        if (want >= 0 && want != r.cliques) {
            r.ok = false;
            r.note = "expected " + std::to_string(want) + " cliques";
        }
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.1fs", seconds_since(t0));
        if (r.note.empty()) r.note = buf;
    });

    Table t;
    t.header = {"case_id", "graph_vertices", "clique_count"};
    bool all_ok = true;
    for (const Row& r : rows) {
        std::printf("search %-8s vertices=%-4lld cliques=%-6lld %s%s\n", r.id.c_str(), r.vertices,
                    r.cliques, r.ok ? "" : "MISMATCH ", r.note.c_str());
        t.rows.push_back({r.id, std::to_string(r.vertices), std::to_string(r.cliques)});
        all_ok = all_ok && r.ok;
    }
    write_table(t, fs::path(opt.out) / "search_summary", opt.format);
    return all_ok ? 0 : 1;
}

// ---------------------------------------------------------------------------
// classify
// ---------------------------------------------------------------------------

int cmd_classify(const Options& opt) {
    auto cases = select_cases(opt.cases, search_universe());
    if (cases.empty()) {
        std::fprintf(stderr, "error: no classifiable case matches the given selectors\n");
        return 2;
    }
    Expectations exp = load_expectations(opt.expectations);
    qf::GroupCache cache(opt.cache);
    qf::CliqueSearchOptions sopt;
    sopt.node_budget = opt.budget_nodes;

    struct Row {
        std::string id;
        long long cliques = 0, classes = 0, proper = 0, fingerprints = 0;
        bool ok = true;
        std::string note;
    };
    std::vector<Row> rows(cases.size());
    std::mutex io_mutex;

    run_jobs(opt.threads, static_cast<int>(cases.size()), [&](int i) {
        const qf::CaseDescriptor& c = cases[i];
        Row& r = rows[i];
        r.id = c.case_id;
        auto t0 = std::chrono::steady_clock::now();
        qf::LinearGroup g = qf::build_case(c, cache);
        qf::PermGraph graph = qf::build_graph(g);

        std::vector<qf::Clique> cliques;
        fs::path stored = clique_file(opt.out, c.case_id);
        if (fs::exists(stored))
            cliques = load_cliques(stored, graph);
        else
            cliques = qf::enumerate_spread_cliques(graph, sopt);
        r.cliques = static_cast<long long>(cliques.size());

        if (!cliques.empty()) {
            qf::LinearGroup n = case_normalizer(c, g, cache);
            auto classes = qf::parastrophy_classes(graph, cliques, g, n);
            r.classes = static_cast<long long>(classes.size());

            std::vector<int> proper_reps;  // indices into classes
            std::vector<qf::Fingerprint> fps;
            for (size_t k = 0; k < classes.size(); ++k) {
                if (!qf::generates_full_group(classes[k].representative, g)) continue;
                proper_reps.push_back(static_cast<int>(k));
                fps.push_back(qf::fingerprint(classes[k].representative));
            }
            r.proper = static_cast<long long>(proper_reps.size());
            std::set<qf::Fingerprint> distinct(fps.begin(), fps.end());
            r.fingerprints = static_cast<long long>(distinct.size());

            // fingerprint collisions: separate the autotopism groups
            if (r.fingerprints < r.proper) {
                std::map<qf::Fingerprint, std::vector<int>> by_fp;
                for (size_t k = 0; k < proper_reps.size(); ++k)
                    by_fp[fps[k]].push_back(proper_reps[k]);
                json doc;
                doc["case_id"] = c.case_id;
                doc["groups"] = json::array();
                for (const auto& [fp, members] : by_fp) {
                    if (members.size() < 2) continue;
                    json grp;
                    grp["classes"] = json::array();
                    std::vector<qf::AutotopismGroup> autos;
                    for (int k : members) {
                        qf::AutotopismGroup a =
                            qf::autotopism_group(classes[k].representative, g, n);
                        json entry;
                        entry["class_rep_id"] = classes[k].representative_index;
                        entry["order"] = a.order;
                        entry["orbit_profile"] = a.orbit_profile;
                        entry["affine_orbit_profile"] = a.affine_orbit_profile;
                        grp["classes"].push_back(entry);
                        autos.push_back(std::move(a));
                    }
                    grp["verdicts"] = json::array();
                    for (size_t x = 0; x < autos.size(); ++x)
                        for (size_t y = x + 1; y < autos.size(); ++y) {
                            json v;
                            v["a"] = classes[members[x]].representative_index;
                            v["b"] = classes[members[y]].representative_index;
                            v["iso_verdict"] =
                                qf::isomorphism_verdict(qf::pair_group_to_linear(autos[x]),
                                                        qf::pair_group_to_linear(autos[y]));
                            std::string sep = "none";
                            if (autos[x].orbit_profile != autos[y].orbit_profile)
                                sep = "orbit_profile";
                            else if (autos[x].affine_orbit_profile != autos[y].affine_orbit_profile)
                                sep = "affine_orbit_profile";
                            v["separated_by"] = sep;
                            grp["verdicts"].push_back(v);
                        }
                    doc["groups"].push_back(grp);
                }
                std::lock_guard<std::mutex> lock(io_mutex);
                write_json(doc, fs::path(opt.out) / ("autotopism-" + c.case_id + ".json"));
            }
        }

        const json* want = exp.table_row(c.case_id);
        if (want) {
            if (r.cliques != want->at("cliques").get<long long>() ||
                r.classes != want->at("parastrophy_classes").get<long long>() ||
                r.proper != want->at("proper_g_classes").get<long long>() ||
                r.fingerprints != want->at("distinct_fingerprints").get<long long>()) {
                r.ok = false;
                r.note = "expected " + want->dump();
            }
        } else if (exp.obstruction(c.case_id) && r.cliques != 0) {
            r.ok = false;
            r.note = "expected an empty search";
        }
        if (r.note.empty()) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.1fs", seconds_since(t0));
            r.note = buf;
        }
    });

    Table t;
    t.header = {"case_id", "cliques", "parastrophy_classes", "proper_G_classes",
                "distinct_fingerprints"};
    bool all_ok = true;
    for (const Row& r : rows) {
        std::printf("classify %-8s cliques=%-6lld classes=%-3lld proper=%-3lld fingerprints=%-3lld %s%s\n",
                    r.id.c_str(), r.cliques, r.classes, r.proper, r.fingerprints,
                    r.ok ? "" : "MISMATCH ", r.note.c_str());
        t.rows.push_back({r.id, std::to_string(r.cliques), std::to_string(r.classes),
                          std::to_string(r.proper), std::to_string(r.fingerprints)});
        all_ok = all_ok && r.ok;
    }
    write_table(t, fs::path(opt.out) / "classification", opt.format);
    return all_ok ? 0 : 1;
}

// ---------------------------------------------------------------------------
// obstruct
// ---------------------------------------------------------------------------

json certificate_to_json(const qf::ObstructionCertificate& cert) {
    json j;
    j["case_id"] = cert.case_id;
    j["subgroup"] = cert.subgroup_descriptor;
    j["orbit_a"] = cert.orbit_a;
    j["orbit_b"] = cert.orbit_b;
    j["intersection_sizes"] = cert.intersection_sizes;
    j["p"] = cert.p;
    j["hypothesis_holds"] = cert.hypothesis_holds;
    j["found"] = cert.found;
    j["note"] = cert.note;
    return j;
}

int cmd_obstruct(const Options& opt) {
    std::vector<std::string> universe = {"4.e-240", "4.e-480", "4.j", "4.k-360", "4.k-720", "4.m"};
    std::vector<std::string> selected;
    for (const std::string& id : universe) {
        bool keep = opt.cases.empty();
        for (const std::string& sel : opt.cases)
            keep = keep || selector_matches(sel, id) || sel == id ||
                   (id == "4.j" && selector_matches(id, sel));
        if (keep) selected.push_back(id);
    }
    if (selected.empty()) {
        std::fprintf(stderr, "error: no obstruction case matches the given selectors\n");
        return 2;
    }
    Expectations exp = load_expectations(opt.expectations);
    qf::GroupCache cache(opt.cache);
    bool all_ok = true;

    for (const std::string& id : selected) {
        if (id == "4.m") {
            std::printf("obstruct 4.m: skipped: no construction\n");
            continue;
        }
        if (id == "4.j") {
            auto t0 = std::chrono::steady_clock::now();
            std::vector<qf::LinearGroup> tower;
            for (const char* tid : {"4.j-160", "4.j-320", "4.j-640", "4.j-1920", "4.j-3840"})
                tower.push_back(qf::build_case(qf::find_case(tid), cache));
            qf::CliqueSearchOptions sopt;
            sopt.node_budget = opt.budget_nodes;
            try {
                qf::E32Report rep = qf::e32_pipeline(tower, sopt);
                json j;
                j["l_order"] = rep.l_order;
                j["tower_orders"] = rep.tower_orders;
                j["block_sizes"] = rep.block_sizes;
                j["a0_count"] = rep.a0_count;
                j["b_total"] = rep.b_total;
                j["b_non2group"] = rep.b_non2group;
                j["non2group_extensions_empty"] = rep.non2group_extensions_empty;
                j["s_clique_total"] = rep.s_clique_total;
                j["s_class_count"] = rep.s_class_count;
                j["stab192_count"] = rep.stab192_count;
                j["kstar_group_order"] = rep.kstar_group_order;
                j["kstar_block_orbits"] = rep.kstar_block_orbits;
                j["non_kstar_extensions_empty"] = rep.non_kstar_extensions_empty;
                j["counting_argument_ok"] = rep.counting_argument_ok;
                j["verdict"] = rep.verdict;
                write_json(j, fs::path(opt.out) / "e32_pipeline.json");
                bool ok = rep.verdict == "no 79-clique";
                if (const json* want = exp.e32()) {
                    ok = ok && rep.a0_count == want->at("a0_count").get<long long>() &&
                         rep.s_class_count == want->at("s_class_count").get<long long>() &&
                         rep.stab192_count == want->at("stab192_count").get<long long>() &&
                         rep.kstar_group_order == want->at("kstar_group_order").get<long long>() &&
                         rep.kstar_block_orbits ==
                             want->at("kstar_block_orbits").get<std::vector<long long>>() &&
                         rep.verdict == want->at("verdict").get<std::string>();
                }
                std::printf("obstruct 4.j: %s (a0=%lld classes=%lld stab192=%lld, %.1fs)%s\n",
                            rep.verdict.c_str(), rep.a0_count, rep.s_class_count,
                            rep.stab192_count, seconds_since(t0), ok ? "" : " MISMATCH");
                all_ok = all_ok && ok;
            } catch (const std::exception& e) {
                std::printf("obstruct 4.j: FAILED: %s\n", e.what());
                all_ok = false;
            }
            continue;
        }
        const json* spec = exp.obstruction(id);
        std::string strategy = spec ? spec->at("strategy").get<std::string>()
                                    : (id.rfind("4.k", 0) == 0 ? "sylow" : "sylow-normalizer");
        int q = spec ? spec->at("q").get<int>() : 5;
        qf::LinearGroup g = qf::build_case(qf::find_case(id), cache);
        qf::ObstructionCertificate cert = qf::find_obstruction(g, q, strategy, id);
        write_json(certificate_to_json(cert), fs::path(opt.out) / ("obstruction-" + id + ".json"));
        bool ok = cert.found && cert.hypothesis_holds;
        if (spec && ok)
            ok = cert.intersection_sizes == spec->at("sizes").get<std::vector<long long>>();
        std::string sizes;
        for (long long s : cert.intersection_sizes)
            sizes += (sizes.empty() ? "" : ",") + std::to_string(s);
        std::printf("obstruct %s: %s via %s, sizes {%s} mod %d%s\n", id.c_str(),
                    ok ? "certified" : "NOT CERTIFIED", cert.subgroup_descriptor.c_str(),
                    sizes.c_str(), cert.p, ok ? "" : " MISMATCH");
        all_ok = all_ok && ok;
    }
    return all_ok ? 0 : 1;
}

// ---------------------------------------------------------------------------
// report
// ---------------------------------------------------------------------------

void print_file_if_present(const fs::path& path, const std::string& title) {
    std::ifstream in(path);
    if (!in) return;
    std::printf("\n== %s (%s) ==\n", title.c_str(), path.string().c_str());
    std::string line;
    while (std::getline(in, line)) std::printf("%s\n", line.c_str());
}

int cmd_report(const Options& opt) {
    fs::path out(opt.out);
    bool any = false;
    for (const char* stem : {"catalog", "search_summary", "classification"}) {
        for (const char* ext : {".csv", ".json"}) {
            fs::path p = out / (std::string(stem) + ext);
            if (fs::exists(p)) {
                print_file_if_present(p, stem);
                any = true;
                break;
            }
        }
    }
    if (fs::exists(out))
        for (const auto& entry : fs::directory_iterator(out)) {
            std::string name = entry.path().filename().string();
            if (name.rfind("obstruction-", 0) == 0 || name == "e32_pipeline.json" ||
                name.rfind("autotopism-", 0) == 0) {
                print_file_if_present(entry.path(), name);
                any = true;
            }
        }
    if (!any) {
        std::fprintf(stderr, "error: no output files under %s; run the other subcommands first\n",
                     opt.out.c_str());
        return 2;
    }
    return 0;
}

void add_common_flags(CLI::App* app, Options& opt) {
    app->add_option("--case", opt.cases, "case selector, repeatable (exact id or prefix)");
    app->add_option("--out", opt.out, "output directory");
    app->add_option("--threads", opt.threads, "worker threads for per-case jobs");
    app->add_option("--cache", opt.cache, "group cache directory");
    app->add_option("--budget-nodes", opt.budget_nodes, "search node budget (-1: unlimited)");
    app->add_option("--format", opt.format, "table output format")
        ->check(CLI::IsMember({"csv", "json"}));
    app->add_option("--expectations", opt.expectations, "expected-results file");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quasifield search over exceptional transitive linear groups"};
    app.require_subcommand(1);
    Options opt;

    CLI::App* sub_catalog = app.add_subcommand("catalog", "build and verify the case groups");
    CLI::App* sub_search = app.add_subcommand("search", "enumerate sharply transitive sets");
    CLI::App* sub_classify = app.add_subcommand("classify", "parastrophy classes and invariants");
    CLI::App* sub_obstruct = app.add_subcommand("obstruct", "non-existence certificates");
    CLI::App* sub_report = app.add_subcommand("report", "summarize previous output");
    for (CLI::App* s : {sub_catalog, sub_search, sub_classify, sub_obstruct, sub_report})
        add_common_flags(s, opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sub_catalog->parsed()) return cmd_catalog(opt);
        if (sub_search->parsed()) return cmd_search(opt);
        if (sub_classify->parsed()) return cmd_classify(opt);
        if (sub_obstruct->parsed()) return cmd_obstruct(opt);
        if (sub_report->parsed()) return cmd_report(opt);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
