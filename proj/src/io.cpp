#include "gibbstree/io.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "gibbstree/errors.hpp"

namespace gibbstree {

namespace fs = std::filesystem;

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::ofstream open_out(const fs::path& file) {
    std::ofstream out(file);
    if (!out) throw config_error("cannot open for writing: " + file.string());
    return out;
}

std::ifstream open_in(const fs::path& file) {
    std::ifstream in(file);
    if (!in) throw config_error("cannot open for reading: " + file.string());
    return in;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> parts;
    std::stringstream ss(line);
    std::string part;
    while (std::getline(ss, part, ',')) parts.push_back(part);
    return parts;
}

}  // namespace

void write_grid_csv(const Grid& g, const fs::path& file) {
    auto out = open_out(file);
    out << "node,weight\n";
    for (int i = 0; i < g.n_nodes(); ++i)
        out << fmt17(g.nodes[i]) << ',' << fmt17(g.weights[i]) << '\n';
}

void write_field_csv(const Field& f, const fs::path& file) {
    auto out = open_out(file);
    out << "t,value\n";
    if (f.grid->nodes.front() > 0.0)
        out << fmt17(0.0) << ',' << fmt17(f.value_at_zero) << '\n';
    for (int i = 0; i < f.size(); ++i)
        out << fmt17(f.grid->nodes[i]) << ',' << fmt17(f.values[i]) << '\n';
}

Field read_field_csv(const GridPtr& grid, const fs::path& file) {
    auto in = open_in(file);
    std::string line;
    if (!std::getline(in, line) || line.rfind("t,value", 0) != 0)
        throw config_error("field CSV must start with header 't,value': " + file.string());
    std::vector<std::pair<double, double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto parts = split_csv_line(line);
        if (parts.size() != 2) throw config_error("bad field CSV row: " + line);
        rows.emplace_back(std::stod(parts[0]), std::stod(parts[1]));
    }
    Field f(grid);
    size_t pos = 0;
    if (!rows.empty() && rows[0].first == 0.0 && grid->nodes.front() > 0.0) {
        f.value_at_zero = rows[0].second;
        pos = 1;
    }
    if (rows.size() - pos != grid->nodes.size())
        throw config_error("field CSV row count does not match the grid: " + file.string());
    for (int i = 0; i < f.size(); ++i, ++pos) {
        if (std::abs(rows[pos].first - grid->nodes[i]) > 1e-12)
            throw config_error("field CSV nodes do not match the grid: " + file.string());
        f.values[i] = rows[pos].second;
    }
    return f;
}

void write_vertexfield_csv(const VertexField& vf, const fs::path& file) {
    auto out = open_out(file);
    out << "vertex,t,value\n";
    for (int l = 0; l <= vf.depth; ++l) {
        for (size_t r = 0; r < vf.levels[l].size(); ++r) {
            const VertexAddr addr = addr_from_rank(l, static_cast<std::int64_t>(r), vf.k, vf.mode);
            const std::string name = to_string(addr);
            const Field& f = vf.levels[l][r];
            if (f.grid->nodes.front() > 0.0)
                out << name << ',' << fmt17(0.0) << ',' << fmt17(f.value_at_zero) << '\n';
            for (int i = 0; i < f.size(); ++i)
                out << name << ',' << fmt17(f.grid->nodes[i]) << ',' << fmt17(f.values[i]) << '\n';
        }
    }
}

VertexField read_vertexfield_csv(const GridPtr& grid, int k, TreeMode mode,
                                 const fs::path& file) {
    auto in = open_in(file);
    std::string line;
    if (!std::getline(in, line) || line.rfind("vertex,t,value", 0) != 0)
        throw config_error("vertex field CSV must start with 'vertex,t,value': " + file.string());
    std::map<std::string, std::vector<std::pair<double, double>>> by_vertex;
    std::vector<std::string> order;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto parts = split_csv_line(line);
        if (parts.size() != 3) throw config_error("bad vertex field CSV row: " + line);
        if (by_vertex.find(parts[0]) == by_vertex.end()) order.push_back(parts[0]);
        by_vertex[parts[0]].emplace_back(std::stod(parts[1]), std::stod(parts[2]));
    }
    int depth = 0;
    for (const auto& name : order)
        depth = std::max(depth, parse_vertex(name).depth());

    VertexField vf;
    vf.k = k;
    vf.mode = mode;
    vf.depth = depth;
    vf.provenance = Provenance::Manual;
    vf.levels.resize(depth + 1);
    for (int l = 0; l <= depth; ++l)
        vf.levels[l].resize(level_size(k, l, mode), Field(grid));

    std::vector<std::vector<bool>> seen(depth + 1);
    for (int l = 0; l <= depth; ++l) seen[l].assign(vf.levels[l].size(), false);

    for (const auto& [name, rows] : by_vertex) {
        const VertexAddr addr = parse_vertex(name);
        Field f(grid);
        size_t pos = 0;
        if (!rows.empty() && rows[0].first == 0.0 && grid->nodes.front() > 0.0) {
            f.value_at_zero = rows[0].second;
            pos = 1;
        }
        if (rows.size() - pos != grid->nodes.size())
            throw config_error("vertex '" + name + "' row count does not match the grid");
        for (int i = 0; i < f.size(); ++i, ++pos) f.values[i] = rows[pos].second;
        if (f.value_at_zero != 0.0)
            throw config_error("vertex '" + name + "' does not vanish at t = 0");
        vf.at(addr) = std::move(f);
        seen[addr.depth()][rank_in_level(addr, k, mode)] = true;
    }
    for (int l = 0; l <= depth; ++l)
        for (size_t r = 0; r < seen[l].size(); ++r)
            if (!seen[l][r])
                throw config_error("vertex field CSV is not total on the volume (missing " +
                                   to_string(addr_from_rank(l, r, k, mode)) + ")");
    return vf;
}

void write_configuration_csv(const Configuration& cfg, const fs::path& file) {
    auto out = open_out(file);
    out << "vertex,spin\n";
    for (int l = 0; l <= cfg.depth; ++l)
        for (size_t r = 0; r < cfg.spins[l].size(); ++r)
            out << to_string(addr_from_rank(l, static_cast<std::int64_t>(r), cfg.k, cfg.mode))
                << ',' << fmt17(cfg.spins[l][r]) << '\n';
}

void write_json(const nlohmann::json& j, const fs::path& file) {
    auto out = open_out(file);
    out << j.dump(2) << '\n';
}

fs::path make_run_dir(const fs::path& outdir, const std::string& command) {
    fs::create_directories(outdir);
    const auto now = std::chrono::system_clock::now();
    const auto t = std::chrono::system_clock::to_time_t(now);
    char stamp[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(stamp, sizeof(stamp), "%Y%m%dT%H%M%S", &tm);
    for (int i = 0;; ++i) {
        fs::path dir = outdir / (command + "-" + stamp + (i ? "-" + std::to_string(i) : ""));
        if (!fs::exists(dir)) {
            fs::create_directories(dir);
            return dir;
        }
    }
}

}  // namespace gibbstree
