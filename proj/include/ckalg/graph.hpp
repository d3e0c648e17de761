#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ckalg {

enum class VertexId : std::uint32_t {};
enum class EdgeId : std::uint32_t {};

constexpr std::size_t index_of(VertexId v) noexcept { return static_cast<std::size_t>(v); }
constexpr std::size_t index_of(EdgeId e) noexcept { return static_cast<std::size_t>(e); }
constexpr VertexId vertex_at(std::size_t i) noexcept { return static_cast<VertexId>(i); }
constexpr EdgeId edge_at(std::size_t i) noexcept { return static_cast<EdgeId>(i); }

/// A finite path: either a bare vertex (length 0) or a composable edge sequence.
/// Paths are only built through Graph, which checks composability; a Path
/// carries its endpoints so algebra code never has to look them up.
class Path {
public:
    Path() = default;

    std::size_t length() const noexcept { return edges_.size(); }
    bool is_vertex() const noexcept { return edges_.empty(); }
    VertexId source() const noexcept { return source_; }
    VertexId range() const noexcept { return range_; }
    const std::vector<EdgeId>& edges() const noexcept { return edges_; }
    EdgeId edge(std::size_t i) const { return edges_.at(i); }

    /// Lexicographic by edge index sequence (edge indices follow edge-id order),
    /// ties broken by source vertex for length-0 paths.
    friend std::strong_ordering operator<=>(const Path& a, const Path& b) {
        if (auto c = a.edges_ <=> b.edges_; c != 0) return c;
        return a.source_ <=> b.source_;
    }
    friend bool operator==(const Path& a, const Path& b) {
        return a.source_ == b.source_ && a.edges_ == b.edges_;
    }

    /// True when `*this` is an initial segment of `other`. A vertex is a prefix
    /// of every path starting at it.
    bool is_prefix_of(const Path& other) const noexcept;

    /// `other` with this prefix removed. Requires is_prefix_of(other).
    Path strip_prefix_from(const Path& other) const;

    /// μ·α; requires range() == tail.source().
    Path concat(const Path& tail) const;

    /// e·μ; requires the edge's range to be source().
    Path prepend(EdgeId e, VertexId e_source) const;

private:
    friend class Graph;
    Path(VertexId s, VertexId r, std::vector<EdgeId> edges)
        : source_(s), range_(r), edges_(std::move(edges)) {}

    VertexId source_{};
    VertexId range_{};
    std::vector<EdgeId> edges_;
};

struct EdgeDecl {
    std::string id;
    std::string source;
    std::string range;
};

using CountMatrix = std::vector<std::vector<std::uint64_t>>;

struct StandingAssumptionReport {
    bool transitive = false;
    bool all_cycles_have_exits = false;
    std::vector<std::string> sinks;
    std::vector<std::string> sources;

    bool holds() const noexcept { return transitive && all_cycles_have_exits; }
};

class Graph;
using GraphPtr = std::shared_ptr<const Graph>;

/// Finite directed multigraph. Vertices and edges are renumbered so that index
/// order equals lexicographic id order; every derived listing (paths, blocks,
/// matrix bases) inherits that order.
class Graph {
public:
    /// Throws UsageError on duplicate ids, dangling endpoints or an empty vertex set.
    static GraphPtr create(std::vector<std::string> vertices, std::vector<EdgeDecl> edges);

    std::size_t vertex_count() const noexcept { return vertex_names_.size(); }
    std::size_t edge_count() const noexcept { return edge_names_.size(); }

    const std::string& vertex_name(VertexId v) const { return vertex_names_.at(index_of(v)); }
    const std::string& edge_name(EdgeId e) const { return edge_names_.at(index_of(e)); }
    std::optional<VertexId> find_vertex(std::string_view id) const;
    std::optional<EdgeId> find_edge(std::string_view id) const;

    VertexId source(EdgeId e) const { return edge_source_.at(index_of(e)); }
    VertexId range(EdgeId e) const { return edge_range_.at(index_of(e)); }
    std::span<const EdgeId> out_edges(VertexId v) const { return out_.at(index_of(v)); }
    std::span<const EdgeId> in_edges(VertexId v) const { return in_.at(index_of(v)); }
    std::vector<EdgeId> edges_between(VertexId v, VertexId w) const;

    /// Entry (v, w) counts edges v -> w.
    CountMatrix adjacency_matrix() const;

    Path vertex_path(VertexId v) const;
    Path edge_path(EdgeId e) const;
    /// Throws UsageError when the sequence is empty or not composable.
    Path make_path(std::span<const EdgeId> edges) const;

    /// Initial segment of length `len` (a vertex path when len is 0).
    Path truncate(const Path& p, std::size_t len) const;

    /// All length-k paths in lexicographic order, optionally filtered by endpoints.
    std::vector<Path> paths_of_length(std::size_t k,
                                      std::optional<VertexId> source = std::nullopt,
                                      std::optional<VertexId> range = std::nullopt) const;

    /// Number of length-j paths leaving v (Σ_w A^j(v, w)).
    std::uint64_t count_paths_from(VertexId v, std::size_t j) const;

    StandingAssumptionReport validate_standing_assumption() const;

    bool has_sink() const noexcept;

    /// "e1 e2" for edge paths, the vertex id for length-0 paths.
    std::string path_to_string(const Path& p) const;

    /// Serialization in the line-oriented graph text format.
    std::string to_text() const;

private:
    Graph() = default;

    std::vector<std::string> vertex_names_;
    std::vector<std::string> edge_names_;
    std::vector<VertexId> edge_source_;
    std::vector<VertexId> edge_range_;
    std::vector<std::vector<EdgeId>> out_;
    std::vector<std::vector<EdgeId>> in_;
    std::unordered_map<std::string, VertexId> vertex_index_;
    std::unordered_map<std::string, EdgeId> edge_index_;
};

}  // namespace ckalg
