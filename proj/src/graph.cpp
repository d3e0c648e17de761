#include "ckalg/graph.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "ckalg/errors.hpp"

namespace ckalg {

bool Path::is_prefix_of(const Path& other) const noexcept {
    if (source_ != other.source_) return false;
    if (edges_.size() > other.edges_.size()) return false;
    return std::equal(edges_.begin(), edges_.end(), other.edges_.begin());
}

Path Path::strip_prefix_from(const Path& other) const {
    std::vector<EdgeId> rest(other.edges_.begin() + static_cast<std::ptrdiff_t>(edges_.size()),
                             other.edges_.end());
    return Path(range_, other.range_, std::move(rest));
}

Path Path::concat(const Path& tail) const {
    if (tail.edges_.empty()) return *this;
    if (edges_.empty()) return tail;
    std::vector<EdgeId> joined;
    joined.reserve(edges_.size() + tail.edges_.size());
    joined.insert(joined.end(), edges_.begin(), edges_.end());
    joined.insert(joined.end(), tail.edges_.begin(), tail.edges_.end());
    return Path(source_, tail.range_, std::move(joined));
}

Path Path::prepend(EdgeId e, VertexId e_source) const {
    std::vector<EdgeId> joined;
    joined.reserve(edges_.size() + 1);
    joined.push_back(e);
    joined.insert(joined.end(), edges_.begin(), edges_.end());
    return Path(e_source, range_, std::move(joined));
}

GraphPtr Graph::create(std::vector<std::string> vertices, std::vector<EdgeDecl> edges) {
    if (vertices.empty()) throw UsageError("graph has no vertices");

    std::sort(vertices.begin(), vertices.end());
    if (auto dup = std::adjacent_find(vertices.begin(), vertices.end()); dup != vertices.end())
        throw UsageError("duplicate vertex id '" + *dup + "'");

    std::sort(edges.begin(), edges.end(),
              [](const EdgeDecl& a, const EdgeDecl& b) { return a.id < b.id; });
    for (std::size_t i = 1; i < edges.size(); ++i)
        if (edges[i].id == edges[i - 1].id)
            throw UsageError("duplicate edge id '" + edges[i].id + "'");

    auto g = std::shared_ptr<Graph>(new Graph());
    g->vertex_names_ = std::move(vertices);
    for (std::size_t i = 0; i < g->vertex_names_.size(); ++i)
        g->vertex_index_.emplace(g->vertex_names_[i], vertex_at(i));
    g->out_.resize(g->vertex_names_.size());
    g->in_.resize(g->vertex_names_.size());

    for (std::size_t i = 0; i < edges.size(); ++i) {
        const auto& d = edges[i];
        auto s = g->find_vertex(d.source);
        if (!s) throw UsageError("edge '" + d.id + "' has undeclared source '" + d.source + "'");
        auto r = g->find_vertex(d.range);
        if (!r) throw UsageError("edge '" + d.id + "' has undeclared range '" + d.range + "'");
        g->edge_names_.push_back(d.id);
        g->edge_source_.push_back(*s);
        g->edge_range_.push_back(*r);
        g->edge_index_.emplace(d.id, edge_at(i));
        g->out_[index_of(*s)].push_back(edge_at(i));
        g->in_[index_of(*r)].push_back(edge_at(i));
    }
    return g;
}

std::optional<VertexId> Graph::find_vertex(std::string_view id) const {
    auto it = vertex_index_.find(std::string(id));
    if (it == vertex_index_.end()) return std::nullopt;
    return it->second;
}

std::optional<EdgeId> Graph::find_edge(std::string_view id) const {
    auto it = edge_index_.find(std::string(id));
    if (it == edge_index_.end()) return std::nullopt;
    return it->second;
}

std::vector<EdgeId> Graph::edges_between(VertexId v, VertexId w) const {
    std::vector<EdgeId> result;
    for (EdgeId e : out_edges(v))
        if (range(e) == w) result.push_back(e);
    return result;
}

CountMatrix Graph::adjacency_matrix() const {
    CountMatrix a(vertex_count(), std::vector<std::uint64_t>(vertex_count(), 0));
    for (std::size_t e = 0; e < edge_count(); ++e)
        ++a[index_of(edge_source_[e])][index_of(edge_range_[e])];
    return a;
}

Path Graph::vertex_path(VertexId v) const {
    if (index_of(v) >= vertex_count()) throw UsageError("vertex index out of range");
    return Path(v, v, {});
}

Path Graph::edge_path(EdgeId e) const {
    return Path(source(e), range(e), {e});
}

Path Graph::make_path(std::span<const EdgeId> edges) const {
    if (edges.empty()) throw UsageError("empty edge sequence");
    for (EdgeId e : edges)
        if (index_of(e) >= edge_count()) throw UsageError("edge index out of range");
    for (std::size_t j = 0; j + 1 < edges.size(); ++j) {
        if (range(edges[j]) != source(edges[j + 1]))
            throw UsageError("edges '" + edge_name(edges[j]) + "' and '" +
                             edge_name(edges[j + 1]) + "' are not composable");
    }
    return Path(source(edges.front()), range(edges.back()),
                std::vector<EdgeId>(edges.begin(), edges.end()));
}

Path Graph::truncate(const Path& p, std::size_t len) const {
    if (len >= p.length()) return p;
    if (len == 0) return vertex_path(p.source());
    std::vector<EdgeId> head(p.edges().begin(), p.edges().begin() + static_cast<std::ptrdiff_t>(len));
    VertexId end = range(head.back());
    return Path(p.source(), end, std::move(head));
}

std::vector<Path> Graph::paths_of_length(std::size_t k, std::optional<VertexId> source,
                                         std::optional<VertexId> range) const {
    std::vector<Path> result;
    if (k == 0) {
        for (std::size_t i = 0; i < vertex_count(); ++i) {
            VertexId v = vertex_at(i);
            if ((!source || *source == v) && (!range || *range == v))
                result.push_back(vertex_path(v));
        }
        return result;
    }

    std::vector<EdgeId> stack;
    stack.reserve(k);
    auto extend = [&](auto&& self, VertexId at) -> void {
        if (stack.size() == k) {
            if (!range || *range == at)
                result.push_back(Path(this->source(stack.front()), at, stack));
            return;
        }
        for (EdgeId e : out_edges(at)) {
            stack.push_back(e);
            self(self, this->range(e));
            stack.pop_back();
        }
    };

    // Starting edges in index order keeps the whole listing lexicographic.
    for (std::size_t i = 0; i < edge_count(); ++i) {
        EdgeId e = edge_at(i);
        if (source && this->source(e) != *source) continue;
        stack.push_back(e);
        extend(extend, this->range(e));
        stack.pop_back();
    }
    return result;
}

std::uint64_t Graph::count_paths_from(VertexId v, std::size_t j) const {
    // ways[w] = number of length-t paths from v ending at w
    std::vector<std::uint64_t> ways(vertex_count(), 0);
    ways[index_of(v)] = 1;
    for (std::size_t t = 0; t < j; ++t) {
        std::vector<std::uint64_t> next(vertex_count(), 0);
        for (std::size_t e = 0; e < edge_count(); ++e) {
            auto& slot = next[index_of(edge_range_[e])];
            if (__builtin_add_overflow(slot, ways[index_of(edge_source_[e])], &slot))
                throw UsageError("path count overflows 64 bits");
        }
        ways = std::move(next);
    }
    std::uint64_t total = 0;
    for (auto w : ways)
        if (__builtin_add_overflow(total, w, &total))
            throw UsageError("path count overflows 64 bits");
    return total;
}

StandingAssumptionReport Graph::validate_standing_assumption() const {
    StandingAssumptionReport report;
    const std::size_t n = vertex_count();

    for (std::size_t v = 0; v < n; ++v) {
        if (out_[v].empty()) report.sinks.push_back(vertex_names_[v]);
        if (in_[v].empty()) report.sources.push_back(vertex_names_[v]);
    }

    // Reachability by paths of non-zero length: BFS seeded with direct successors.
    report.transitive = true;
    for (std::size_t v = 0; v < n && report.transitive; ++v) {
        std::vector<bool> seen(n, false);
        std::deque<std::size_t> queue;
        for (EdgeId e : out_[v]) {
            auto w = index_of(edge_range_[index_of(e)]);
            if (!seen[w]) {
                seen[w] = true;
                queue.push_back(w);
            }
        }
        while (!queue.empty()) {
            auto x = queue.front();
            queue.pop_front();
            for (EdgeId e : out_[x]) {
                auto w = index_of(edge_range_[index_of(e)]);
                if (!seen[w]) {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        report.transitive = std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
    }

    // A cycle lacks an exit iff every vertex on it emits exactly one edge, so the
    // exitless cycles are exactly the cycles of the functional graph obtained by
    // following the unique out-edge of out-degree-1 vertices.
    report.all_cycles_have_exits = true;
    std::vector<int> state(n, 0);  // 0 unvisited, 1 on current walk, 2 done
    for (std::size_t start = 0; start < n && report.all_cycles_have_exits; ++start) {
        std::vector<std::size_t> walk;
        std::size_t v = start;
        while (state[v] == 0 && out_[v].size() == 1) {
            state[v] = 1;
            walk.push_back(v);
            v = index_of(edge_range_[index_of(out_[v].front())]);
        }
        if (state[v] == 1) report.all_cycles_have_exits = false;
        for (auto w : walk) state[w] = 2;
    }
    return report;
}

bool Graph::has_sink() const noexcept {
    return std::any_of(out_.begin(), out_.end(), [](const auto& o) { return o.empty(); });
}

std::string Graph::path_to_string(const Path& p) const {
    if (p.is_vertex()) return vertex_name(p.source());
    std::string out;
    for (std::size_t i = 0; i < p.length(); ++i) {
        if (i) out += ' ';
        out += edge_name(p.edge(i));
    }
    return out;
}

std::string Graph::to_text() const {
    std::ostringstream os;
    for (const auto& v : vertex_names_) os << "vertex " << v << '\n';
    for (std::size_t e = 0; e < edge_count(); ++e)
        os << "edge " << edge_names_[e] << " : " << vertex_names_[index_of(edge_source_[e])]
           << " -> " << vertex_names_[index_of(edge_range_[e])] << '\n';
    return os.str();
}

}  // namespace ckalg
