#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ckalg/element.hpp"

namespace ckalg {

/// For each vertex v an ordered list of m(v) disjoint non-empty classes
/// covering s^{-1}(v). Vertices without outgoing edges have m(v) = 1 with an
/// empty class.
class OutSplitPartition {
public:
    /// Vertices missing from `classes` get a single class. Throws UsageError
    /// when the listed classes are empty, overlap, or miss an edge.
    static OutSplitPartition create(GraphPtr g,
                                    std::map<VertexId, std::vector<std::vector<EdgeId>>> classes);
    static OutSplitPartition trivial(GraphPtr g) { return create(std::move(g), {}); }

    const GraphPtr& graph_ptr() const noexcept { return graph_; }
    std::size_t class_count(VertexId v) const { return classes_.at(index_of(v)).size(); }
    const std::vector<std::vector<EdgeId>>& classes(VertexId v) const {
        return classes_.at(index_of(v));
    }
    /// 0-based index of the class holding e.
    std::size_t class_of(EdgeId e) const { return class_of_.at(index_of(e)); }

private:
    OutSplitPartition() = default;

    GraphPtr graph_;
    std::vector<std::vector<std::vector<EdgeId>>> classes_;
    std::vector<std::size_t> class_of_;
};

struct OutSplitResult {
    GraphPtr graph;
    /// vertex_copies[v][i] is v^{i+1}
    std::vector<std::vector<VertexId>> vertex_copies;
    /// edge_copies[e][j] is e^{j+1}
    std::vector<std::vector<EdgeId>> edge_copies;
};

/// Vertices v^i (1 <= i <= m(v)) and edges e^j (1 <= j <= m(r(e))) with
/// s(e^j) = s(e)^i for e in class i and r(e^j) = r(e)^j. Copies are named
/// "v^i" / "e^j"; when m = 1 the original id is kept.
OutSplitResult out_split(const OutSplitPartition& part);

struct RelationCheck {
    std::string name;
    bool passed = false;
};

struct HomomorphismReport {
    std::vector<RelationCheck> checks;
    bool passed() const {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return true;
    }
};

template <class K>
class GeneratorMap;

/// Checks in the target algebra that the vertex images are mutually orthogonal
/// projections summing to 1 and that (GA1), (GA2) hold for the images. Marks the
/// map verified when every check passes.
template <class K>
HomomorphismReport verify_homomorphism(GeneratorMap<K>& map);

/// Images of the generators P_v, S_e of a source graph in a target algebra.
template <class K>
class GeneratorMap {
public:
    GeneratorMap(GraphPtr source, GraphPtr target, std::vector<Element<K>> vertex_images,
                 std::vector<Element<K>> edge_images);

    const GraphPtr& source() const noexcept { return source_; }
    const GraphPtr& target() const noexcept { return target_; }
    const Element<K>& vertex_image(VertexId v) const { return vertex_images_.at(index_of(v)); }
    const Element<K>& edge_image(EdgeId e) const { return edge_images_.at(index_of(e)); }
    /// Replaces one image and clears the verified flag.
    void set_edge_image(EdgeId e, Element<K> image);

    bool verified() const noexcept { return verified_; }

    /// Image of S_μ (of P_v for a length-0 path).
    Element<K> path_image(const Path& mu) const;
    /// Extends the generator assignment multiplicatively and linearly.
    Element<K> apply(const Element<K>& x) const;

private:
    friend HomomorphismReport verify_homomorphism<K>(GeneratorMap<K>& map);

    GraphPtr source_;
    GraphPtr target_;
    std::vector<Element<K>> vertex_images_;
    std::vector<Element<K>> edge_images_;
    bool verified_ = false;
};

/// P_v ↦ Σ_i P_{v^i}, S_e ↦ Σ_j S_{e^j}. Throws UsageError unless f is the
/// out-splitting of g along `part`.
template <class K>
GeneratorMap<K> induced_images(const GraphPtr& g, const GraphPtr& f, const OutSplitPartition& part);

struct DiagonalCarryReport {
    bool holds = false;
    bool map_verified = false;
    std::optional<Path> failing_path;
};

/// Whether every P_μ with |μ| <= k lands in the target diagonal. Only a
/// verified map can carry the diagonal; an unverified map reports false.
template <class K>
DiagonalCarryReport verify_diagonal_carry(const GeneratorMap<K>& map, std::size_t k);

struct BlockEntry {
    VertexId from;
    VertexId to;
    std::size_t multiplicity;
};

/// The blocks of B ≅ ⊕ M_{A(v,w)}: every (v, w) with A(v, w) >= 1.
std::vector<BlockEntry> block_structure_report(const Graph& g);

/// "U(2)", "U(1) x U(1) x U(1) x U(1)", ...
std::string unitary_group_summary(const std::vector<BlockEntry>& blocks);

extern template class GeneratorMap<GaussianRational>;
extern template class GeneratorMap<Complex>;

}  // namespace ckalg
