#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gibbstree {

/// Half: rooted tree where every vertex has k direct successors.
/// Full: the root has k+1 successors (every other vertex k); the finite-volume
/// distributions of the measure module live on the full tree.
enum class TreeMode { Half, Full };

TreeMode tree_mode_from_string(const std::string& s);
std::string to_string(TreeMode mode);

/// Vertex address: the digit path from the root (empty = root). Digits are in
/// {0..k-1}, except the first digit in full mode which is in {0..k}.
struct VertexAddr {
    std::vector<std::uint8_t> digits;

    int depth() const { return static_cast<int>(digits.size()); }
    bool is_root() const { return digits.empty(); }
    bool operator==(const VertexAddr&) const = default;
};

/// Serialize as '/'-joined digits; the root is the empty string.
std::string to_string(const VertexAddr& addr);
VertexAddr parse_vertex(const std::string& text);

/// Number of vertices at depth `level`.
std::int64_t level_size(int k, int level, TreeMode mode);

/// Lexicographic rank of an address within its level, and its inverse.
std::int64_t rank_in_level(const VertexAddr& addr, int k, TreeMode mode);
VertexAddr addr_from_rank(int level, std::int64_t rank, int k, TreeMode mode);

/// Direct successors, in digit order.
std::vector<VertexAddr> successors(const VertexAddr& addr, int k, TreeMode mode);

/// All addresses of depth `level` in lexicographic order.
/// Throws resource_error beyond the enumeration cap of 1e7 vertices.
std::vector<VertexAddr> enumerate_level(int k, int level, TreeMode mode);

/// An infinite-path prefix in the half-tree together with its real encoding
/// r = sum digits[n] k^{-n-1} in [0,1].
struct Path {
    int k = 2;
    std::vector<std::uint8_t> digits;
    double r = 0.0;
};

/// Base-k digits of r to the requested depth; ties take the terminating
/// expansion, r = 1 maps to the all-(k-1) path.
Path path_from_r(double r, int k, int depth);
double r_from_path(const Path& p);

enum class PathSide { Left, On, Right };

/// Lexicographic trichotomy of an address against the path prefix of equal
/// length. This fixes the planar order used by the path-gluing construction.
PathSide compare_to_path(const VertexAddr& addr, const Path& p);

}  // namespace gibbstree
