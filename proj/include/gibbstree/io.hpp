#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "gibbstree/constructions.hpp"
#include "gibbstree/field.hpp"
#include "gibbstree/grid.hpp"
#include "gibbstree/measure.hpp"

namespace gibbstree {

/// All numeric output uses 17 significant digits (value-preserving for doubles).
std::string fmt17(double v);

void write_grid_csv(const Grid& g, const std::filesystem::path& file);

/// Field CSV: header `t,value`, a t = 0 row first when 0 is not a node, then
/// one row per node in ascending order.
void write_field_csv(const Field& f, const std::filesystem::path& file);
Field read_field_csv(const GridPtr& grid, const std::filesystem::path& file);

/// VertexField CSV: header `vertex,t,value`, vertices as '/'-joined digits in
/// level order then lexicographic order, each with its full field rows.
void write_vertexfield_csv(const VertexField& vf, const std::filesystem::path& file);
VertexField read_vertexfield_csv(const GridPtr& grid, int k, TreeMode mode,
                                 const std::filesystem::path& file);

void write_configuration_csv(const Configuration& cfg, const std::filesystem::path& file);

void write_json(const nlohmann::json& j, const std::filesystem::path& file);

/// Create `<outdir>/<command>-<timestamp>[-<n>]/`, never clobbering an
/// existing run directory.
std::filesystem::path make_run_dir(const std::filesystem::path& outdir,
                                   const std::string& command);

}  // namespace gibbstree
