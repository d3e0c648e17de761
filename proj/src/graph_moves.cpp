#include "ckalg/graph_moves.hpp"

#include <algorithm>
#include <set>

#include "ckalg/errors.hpp"

namespace ckalg {

OutSplitPartition OutSplitPartition::create(
    GraphPtr g, std::map<VertexId, std::vector<std::vector<EdgeId>>> classes) {
    OutSplitPartition part;
    part.classes_.resize(g->vertex_count());
    part.class_of_.assign(g->edge_count(), 0);

    for (auto& [v, list] : classes) {
        if (index_of(v) >= g->vertex_count()) throw UsageError("partition names an unknown vertex");
        const std::string& name = g->vertex_name(v);
        if (list.empty()) throw UsageError("partition of " + name + " has no classes");
        std::set<EdgeId> seen;
        for (const auto& cls : list) {
            if (cls.empty()) throw UsageError("partition of " + name + " has an empty class");
            for (EdgeId e : cls) {
                if (g->source(e) != v)
                    throw UsageError("edge '" + g->edge_name(e) + "' does not leave " + name);
                if (!seen.insert(e).second)
                    throw UsageError("edge '" + g->edge_name(e) + "' appears twice in the partition of " +
                                     name);
            }
        }
        if (seen.size() != g->out_edges(v).size())
            throw UsageError("partition of " + name + " does not cover every outgoing edge");
    }

    for (std::size_t i = 0; i < g->vertex_count(); ++i) {
        VertexId v = vertex_at(i);
        auto it = classes.find(v);
        if (it == classes.end()) {
            auto out = g->out_edges(v);
            part.classes_[i].emplace_back(out.begin(), out.end());
        } else {
            part.classes_[i] = std::move(it->second);
            for (auto& cls : part.classes_[i]) std::sort(cls.begin(), cls.end());
        }
        for (std::size_t c = 0; c < part.classes_[i].size(); ++c)
            for (EdgeId e : part.classes_[i][c]) part.class_of_[index_of(e)] = c;
    }
    part.graph_ = std::move(g);
    return part;
}

OutSplitResult out_split(const OutSplitPartition& part) {
    const Graph& g = *part.graph_ptr();
    auto copy_name = [](const std::string& base, std::size_t count, std::size_t i) {
        return count == 1 ? base : base + "^" + std::to_string(i + 1);
    };

    std::vector<std::string> vertices;
    std::vector<std::vector<std::string>> vertex_names(g.vertex_count());
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
        const auto m = part.class_count(vertex_at(v));
        for (std::size_t i = 0; i < m; ++i) {
            vertex_names[v].push_back(copy_name(g.vertex_name(vertex_at(v)), m, i));
            vertices.push_back(vertex_names[v].back());
        }
    }

    std::vector<EdgeDecl> edges;
    std::vector<std::vector<std::string>> edge_names(g.edge_count());
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
        const EdgeId edge = edge_at(e);
        const auto from = index_of(g.source(edge));
        const auto to = index_of(g.range(edge));
        const auto m = part.class_count(g.range(edge));
        const auto i = part.class_of(edge);
        for (std::size_t j = 0; j < m; ++j) {
            edge_names[e].push_back(copy_name(g.edge_name(edge), m, j));
            edges.push_back({edge_names[e].back(), vertex_names[from][i], vertex_names[to][j]});
        }
    }

    OutSplitResult result;
    try {
        result.graph = Graph::create(std::move(vertices), std::move(edges));
    } catch (const UsageError& err) {
        throw UsageError(std::string("out-split naming clash: ") + err.what());
    }
    for (const auto& names : vertex_names) {
        auto& copies = result.vertex_copies.emplace_back();
        for (const auto& n : names) copies.push_back(*result.graph->find_vertex(n));
    }
    for (const auto& names : edge_names) {
        auto& copies = result.edge_copies.emplace_back();
        for (const auto& n : names) copies.push_back(*result.graph->find_edge(n));
    }
    return result;
}

template <class K>
GeneratorMap<K>::GeneratorMap(GraphPtr source, GraphPtr target, std::vector<Element<K>> vertex_images,
                              std::vector<Element<K>> edge_images)
    : source_(std::move(source)),
      target_(std::move(target)),
      vertex_images_(std::move(vertex_images)),
      edge_images_(std::move(edge_images)) {
    if (vertex_images_.size() != source_->vertex_count() || edge_images_.size() != source_->edge_count())
        throw UsageError("generator map must assign an image to every generator");
    for (const auto& x : vertex_images_)
        if (x.graph_ptr() != target_) throw UsageError("generator image outside the target algebra");
    for (const auto& x : edge_images_)
        if (x.graph_ptr() != target_) throw UsageError("generator image outside the target algebra");
}

template <class K>
void GeneratorMap<K>::set_edge_image(EdgeId e, Element<K> image) {
    if (image.graph_ptr() != target_) throw UsageError("generator image outside the target algebra");
    edge_images_.at(index_of(e)) = std::move(image);
    verified_ = false;
}

template <class K>
Element<K> GeneratorMap<K>::path_image(const Path& mu) const {
    if (mu.is_vertex()) return vertex_image(mu.source());
    Element<K> image = edge_image(mu.edge(0));
    for (std::size_t i = 1; i < mu.length(); ++i) image = image * edge_image(mu.edge(i));
    return image;
}

template <class K>
Element<K> GeneratorMap<K>::apply(const Element<K>& x) const {
    if (x.graph_ptr() != source_) throw UsageError("element is not in the source algebra of the map");
    std::map<Path, Element<K>> cache;
    auto image_of = [&](const Path& p) -> const Element<K>& {
        auto it = cache.find(p);
        if (it == cache.end()) it = cache.emplace(p, path_image(p)).first;
        return it->second;
    };
    Element<K> result(target_);
    for (const auto& [key, c] : x.terms())
        result += c * (image_of(key.mu) * image_of(key.nu).adjoint());
    return result;
}

template <class K>
GeneratorMap<K> induced_images(const GraphPtr& g, const GraphPtr& f, const OutSplitPartition& part) {
    if (part.graph_ptr() != g) throw UsageError("partition belongs to a different graph");
    const OutSplitResult split = out_split(part);
    if (split.graph->to_text() != f->to_text())
        throw UsageError("target graph is not the out-splitting of the source along this partition");

    std::vector<Element<K>> vertex_images;
    for (std::size_t v = 0; v < g->vertex_count(); ++v) {
        Element<K> image(f);
        for (VertexId copy : split.vertex_copies[v]) {
            auto vc = f->find_vertex(split.graph->vertex_name(copy));
            image += Element<K>::vertex(f, *vc);
        }
        vertex_images.push_back(std::move(image));
    }
    std::vector<Element<K>> edge_images;
    for (std::size_t e = 0; e < g->edge_count(); ++e) {
        Element<K> image(f);
        for (EdgeId copy : split.edge_copies[e]) {
            auto ec = f->find_edge(split.graph->edge_name(copy));
            image += Element<K>::edge(f, *ec);
        }
        edge_images.push_back(std::move(image));
    }
    return GeneratorMap<K>(g, f, std::move(vertex_images), std::move(edge_images));
}

template <class K>
HomomorphismReport verify_homomorphism(GeneratorMap<K>& map) {
    const Graph& src = *map.source();
    const GraphPtr& tgt = map.target();
    HomomorphismReport report;

    Element<K> total(tgt);
    for (std::size_t i = 0; i < src.vertex_count(); ++i) {
        const VertexId v = vertex_at(i);
        const auto& p = map.vertex_image(v);
        report.checks.push_back({"projection P(" + src.vertex_name(v) + ")", is_projection(p)});
        for (std::size_t j = i + 1; j < src.vertex_count(); ++j) {
            const VertexId w = vertex_at(j);
            report.checks.push_back({"orthogonal P(" + src.vertex_name(v) + ") P(" + src.vertex_name(w) + ")",
                                     (p * map.vertex_image(w)).is_zero()});
        }
        total += p;
    }
    report.checks.push_back({"vertex images sum to 1", equals(total, Element<K>::identity(tgt))});

    for (std::size_t i = 0; i < src.edge_count(); ++i) {
        const EdgeId e = edge_at(i);
        const auto& s = map.edge_image(e);
        report.checks.push_back({"GA1 " + src.edge_name(e),
                                 equals(s.adjoint() * s, map.vertex_image(src.range(e)))});
    }
    for (std::size_t i = 0; i < src.vertex_count(); ++i) {
        const VertexId v = vertex_at(i);
        if (src.out_edges(v).empty()) continue;
        Element<K> sum(tgt);
        for (EdgeId e : src.out_edges(v)) sum += map.edge_image(e) * map.edge_image(e).adjoint();
        report.checks.push_back({"GA2 " + src.vertex_name(v), equals(sum, map.vertex_image(v))});
    }
    map.verified_ = report.passed();
    return report;
}

template <class K>
DiagonalCarryReport verify_diagonal_carry(const GeneratorMap<K>& map, std::size_t k) {
    DiagonalCarryReport report;
    report.map_verified = map.verified();
    if (!report.map_verified) return report;
    const Graph& src = *map.source();
    for (std::size_t len = 0; len <= k; ++len) {
        for (const Path& mu : src.paths_of_length(len)) {
            const auto s = map.path_image(mu);
            if (!is_member(s * s.adjoint(), Membership::diagonal())) {
                report.failing_path = mu;
                return report;
            }
        }
    }
    report.holds = true;
    return report;
}

std::vector<BlockEntry> block_structure_report(const Graph& g) {
    std::vector<BlockEntry> blocks;
    const auto a = g.adjacency_matrix();
    for (std::size_t v = 0; v < g.vertex_count(); ++v)
        for (std::size_t w = 0; w < g.vertex_count(); ++w)
            if (a[v][w] > 0) blocks.push_back({vertex_at(v), vertex_at(w), a[v][w]});
    return blocks;
}

std::string unitary_group_summary(const std::vector<BlockEntry>& blocks) {
    if (blocks.empty()) return "trivial";
    std::string out;
    for (const auto& b : blocks) {
        if (!out.empty()) out += " x ";
        out += "U(" + std::to_string(b.multiplicity) + ")";
    }
    return out;
}

template class GeneratorMap<GaussianRational>;
template class GeneratorMap<Complex>;

#define CKALG_INSTANTIATE(K)                                                                     \
    template GeneratorMap<K> induced_images(const GraphPtr&, const GraphPtr&,                    \
                                            const OutSplitPartition&);                           \
    template HomomorphismReport verify_homomorphism(GeneratorMap<K>&);                           \
    template DiagonalCarryReport verify_diagonal_carry(const GeneratorMap<K>&, std::size_t);

CKALG_INSTANTIATE(GaussianRational)
CKALG_INSTANTIATE(Complex)

#undef CKALG_INSTANTIATE

}  // namespace ckalg
