#include "gibbstree/tree.hpp"

#include <cmath>

#include "gibbstree/errors.hpp"

namespace gibbstree {

namespace {
constexpr std::int64_t kEnumerationCap = 10'000'000;

void check_k(int k) {
    if (k < 1) throw contract_error("branching order k must be >= 1");
}
}  // namespace

TreeMode tree_mode_from_string(const std::string& s) {
    if (s == "half") return TreeMode::Half;
    if (s == "full") return TreeMode::Full;
    throw config_error("unknown tree mode: " + s);
}

std::string to_string(TreeMode mode) { return mode == TreeMode::Half ? "half" : "full"; }

std::string to_string(const VertexAddr& addr) {
    std::string out;
    for (size_t i = 0; i < addr.digits.size(); ++i) {
        if (i) out += '/';
        out += std::to_string(static_cast<int>(addr.digits[i]));
    }
    return out;
}

VertexAddr parse_vertex(const std::string& text) {
    VertexAddr addr;
    if (text.empty()) return addr;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t next = text.find('/', pos);
        std::string part = text.substr(pos, next == std::string::npos ? next : next - pos);
        if (part.empty()) throw config_error("bad vertex address: '" + text + "'");
        int d = std::stoi(part);
        if (d < 0 || d > 255) throw config_error("bad vertex digit in '" + text + "'");
        addr.digits.push_back(static_cast<std::uint8_t>(d));
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    return addr;
}

std::int64_t level_size(int k, int level, TreeMode mode) {
    check_k(k);
    if (level < 0) throw contract_error("level must be >= 0");
    if (level == 0) return 1;
    std::int64_t size = (mode == TreeMode::Full) ? k + 1 : k;
    for (int i = 1; i < level; ++i) {
        if (size > kEnumerationCap) throw resource_error("level size exceeds the enumeration cap");
        size *= k;
    }
    return size;
}

std::int64_t rank_in_level(const VertexAddr& addr, int k, TreeMode mode) {
    check_k(k);
    // Mixed radix: the first digit may run to k in full mode, deeper digits to
    // k-1; positional weights are powers of k either way, so the usual
    // accumulate-by-k gives the lexicographic rank.
    std::int64_t rank = 0;
    for (size_t i = 0; i < addr.digits.size(); ++i) {
        const int limit = (mode == TreeMode::Full && i == 0) ? k + 1 : k;
        if (addr.digits[i] >= limit)
            throw contract_error("vertex digit out of range for this tree");
        rank = rank * k + addr.digits[i];
    }
    return rank;
}

VertexAddr addr_from_rank(int level, std::int64_t rank, int k, TreeMode mode) {
    check_k(k);
    if (level < 0 || rank < 0 || rank >= level_size(k, level, mode))
        throw contract_error("addr_from_rank: rank out of range");
    VertexAddr addr;
    addr.digits.resize(level);
    for (int i = level - 1; i >= 1; --i) {
        addr.digits[i] = static_cast<std::uint8_t>(rank % k);
        rank /= k;
    }
    if (level >= 1) addr.digits[0] = static_cast<std::uint8_t>(rank);
    return addr;
}

std::vector<VertexAddr> successors(const VertexAddr& addr, int k, TreeMode mode) {
    check_k(k);
    const int count = (mode == TreeMode::Full && addr.is_root()) ? k + 1 : k;
    std::vector<VertexAddr> out;
    out.reserve(count);
    for (int d = 0; d < count; ++d) {
        VertexAddr child = addr;
        child.digits.push_back(static_cast<std::uint8_t>(d));
        out.push_back(std::move(child));
    }
    return out;
}

std::vector<VertexAddr> enumerate_level(int k, int level, TreeMode mode) {
    const std::int64_t size = level_size(k, level, mode);
    if (size > kEnumerationCap) throw resource_error("level enumeration exceeds the cap");
    std::vector<VertexAddr> out;
    out.reserve(size);
    for (std::int64_t r = 0; r < size; ++r) out.push_back(addr_from_rank(level, r, k, mode));
    return out;
}

Path path_from_r(double r, int k, int depth) {
    check_k(k);
    if (!(r >= 0.0 && r <= 1.0)) throw contract_error("path_from_r: r must be in [0,1]");
    if (depth < 0) throw contract_error("path_from_r: depth must be >= 0");
    Path p;
    p.k = k;
    p.r = r;
    p.digits.reserve(depth);
    double rem = r;
    for (int i = 0; i < depth; ++i) {
        if (rem >= 1.0) {  // r = 1 maps to the all-(k-1) path
            p.digits.push_back(static_cast<std::uint8_t>(k - 1));
            rem = 1.0;
            continue;
        }
        double scaled = rem * k;
        int d = static_cast<int>(std::floor(scaled));
        if (d >= k) d = k - 1;
        p.digits.push_back(static_cast<std::uint8_t>(d));
        rem = scaled - d;
    }
    return p;
}

double r_from_path(const Path& p) {
    double r = 0.0;
    double scale = 1.0;
    for (std::uint8_t d : p.digits) {
        scale /= p.k;
        r += d * scale;
    }
    return r;
}

PathSide compare_to_path(const VertexAddr& addr, const Path& p) {
    if (addr.digits.size() > p.digits.size())
        throw contract_error("compare_to_path: path is shallower than the vertex");
    for (size_t i = 0; i < addr.digits.size(); ++i) {
        if (addr.digits[i] < p.digits[i]) return PathSide::Left;
        if (addr.digits[i] > p.digits[i]) return PathSide::Right;
    }
    return PathSide::On;
}

}  // namespace gibbstree
