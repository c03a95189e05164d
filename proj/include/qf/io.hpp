#ifndef QF_IO_HPP
#define QF_IO_HPP

#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "qf/group.hpp"
#include "qf/matrix.hpp"

namespace qf {

using json = nlohmann::json;

class io_error : public std::runtime_error {
public:
    explicit io_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Matrix wire format: JSON array of d*d integers, row-major, canonical
/// residues.
inline json matrix_to_json(const Matrix& m) {
    json arr = json::array();
    for (int i = 0; i < m.size(); ++i) arr.push_back(static_cast<int>(m.a[i]));
    return arr;
}

inline Matrix matrix_from_json(const json& arr, int d, int p) {
    if (!arr.is_array() || static_cast<int>(arr.size()) != d * d)
        throw io_error("matrix_from_json: expected array of d*d integers");
    Matrix m(d, p);
    for (int i = 0; i < d * d; ++i) {
        int v = arr[i].get<int>();
        if (v < 0 || v >= p) throw io_error("matrix_from_json: entry out of canonical range");
        m.a[i] = static_cast<uint8_t>(v);
    }
    return m;
}

/// Group file: {p, d, order, generators: [matrix...]}. Loading re-closes and
/// verifies the declared order.
inline json group_to_json(const LinearGroup& g) {
    json j;
    j["p"] = g.p;
    j["d"] = g.d;
    j["order"] = g.order();
    json gens = json::array();
    for (const Matrix& m : g.generators) gens.push_back(matrix_to_json(m));
    j["generators"] = gens;
    return j;
}

inline LinearGroup group_from_json(const json& j) {
    int p = j.at("p").get<int>();
    int d = j.at("d").get<int>();
    long long declared = j.at("order").get<long long>();
    std::vector<Matrix> gens;
    for (const auto& a : j.at("generators")) gens.push_back(matrix_from_json(a, d, p));
    LinearGroup g = close(gens, std::max(declared * 2, 1024LL));
    if (g.order() != declared)
        throw io_error("group_from_json: declared order " + std::to_string(declared) +
                       " but closure has " + std::to_string(g.order()));
    return g;
}

inline void save_group(const LinearGroup& g, const std::filesystem::path& path) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw io_error("cannot write " + path.string());
    out << group_to_json(g).dump(2) << "\n";
}

inline LinearGroup load_group(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot read " + path.string());
    json j;
    in >> j;
    return group_from_json(j);
}

}  // namespace qf

#endif
