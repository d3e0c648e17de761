// Acceptance suite: one line per criterion, exit code 0 iff every criterion passes.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "ckalg/dsl.hpp"
#include "ckalg/endo.hpp"
#include "ckalg/formats.hpp"
#include "ckalg/graph_moves.hpp"
#include "ckalg/matrix_rep.hpp"
#include "ckalg/random.hpp"
#include "ckalg/script.hpp"
#include "ckalg/structure_maps.hpp"

using namespace ckalg;

namespace {

using Q = GaussianRational;
using EQ = Element<Q>;
using EC = Element<Complex>;

constexpr double delta_expected = 0.7071068;
constexpr double delta_tolerance = 1e-6;
constexpr std::uint64_t seed = 20240601;

const std::filesystem::path data_dir = std::filesystem::path(CKALG_SOURCE_DIR) / "data";

GraphPtr load(const std::string& file) { return parse_graph_text(read_file(data_dir / file)); }

struct Graphs {
    GraphPtr o2 = load("o2.graph");
    GraphPtr e = load("two_vertex.graph");
    GraphPtr o2t = load("o2t.graph");
    GraphPtr rose = load("rose2.graph");
    GraphPtr split = out_split(parse_partition_text(read_file(data_dir / "rose2.partition"), rose)).graph;

    std::vector<GraphPtr> samples() const { return {o2, e, rose, split}; }
};

/// Outcome of one criterion: pass flag plus a short note.
struct Verdict {
    bool passed = true;
    std::string note;

    void require(bool ok, const std::string& what) {
        if (!ok && passed) note = what;
        passed = passed && ok;
    }
};

EQ sv(const GraphPtr& g, const std::string& e) { return EQ::edge(g, *g->find_edge(e)); }

EQ range_projection(const GraphPtr& g, const std::string& e) { return sv(g, e) * sv(g, e).adjoint(); }

bool relations_hold(const GraphPtr& g) {
    for (std::size_t i = 0; i < g->edge_count(); ++i) {
        const EQ s = EQ::edge(g, edge_at(i));
        if (!(s.adjoint() * s - EQ::vertex(g, g->range(edge_at(i)))).is_zero()) return false;
    }
    for (std::size_t v = 0; v < g->vertex_count(); ++v) {
        if (g->out_edges(vertex_at(v)).empty()) continue;
        EQ sum = -EQ::vertex(g, vertex_at(v));
        for (EdgeId e : g->out_edges(vertex_at(v))) sum += EQ::edge(g, e) * EQ::edge(g, e).adjoint();
        if (!sum.is_zero()) return false;
    }
    return true;
}

Verdict ac1(const Graphs& gs) {
    Verdict v;
    for (const auto& g : {gs.o2, gs.e, gs.rose, gs.split})
        v.require(relations_hold(g), "relations fail on a graph with " + std::to_string(g->edge_count()) + " edges");
    v.note = v.passed ? "GA1/GA2 normalize to 0 on O2, E, and the split pair" : v.note;
    return v;
}

Verdict ac2(const Graphs& gs) {
    Verdict v;
    const auto& g = gs.e;
    std::size_t products = 0;
    for (std::size_t k = 0; k <= 2; ++k) {
        std::vector<Path> paths;
        if (k == 0)
            for (std::size_t i = 0; i < g->vertex_count(); ++i) paths.push_back(g->vertex_path(vertex_at(i)));
        else
            paths = g->paths_of_length(k);
        std::vector<std::pair<Path, Path>> units;
        for (const auto& mu : paths)
            for (const auto& nu : paths)
                if (mu.range() == nu.range()) units.emplace_back(mu, nu);
        for (const auto& [mu, nu] : units)
            for (const auto& [alpha, beta] : units) {
                const EQ lhs = EQ::term(g, mu, nu) * EQ::term(g, alpha, beta);
                const EQ rhs = nu == alpha ? EQ::term(g, mu, beta) : EQ(g);
                v.require(equals(lhs, rhs), "matrix-unit law fails for " + g->path_to_string(mu) + "," +
                                                g->path_to_string(nu) + " x " + g->path_to_string(alpha) + "," +
                                                g->path_to_string(beta));
                ++products;
            }
    }
    if (v.passed) v.note = std::to_string(products) + " products checked";
    return v;
}

Verdict ac3(const Graphs& gs) {
    Verdict v;
    const auto& g = gs.e;
    const auto rep = represent(EQ::identity(g), 2);
    const auto a = g->adjacency_matrix();
    std::vector<std::size_t> sizes;
    for (std::size_t w = 0; w < g->vertex_count(); ++w) {
        std::uint64_t column = 0;
        for (std::size_t x = 0; x < a.size(); ++x)
            for (std::size_t y = 0; y < a.size(); ++y) column += a[x][y] * a[y][w];
        std::size_t brute = 0;
        for (std::size_t e = 0; e < g->edge_count(); ++e)
            for (std::size_t f = 0; f < g->edge_count(); ++f)
                brute += g->range(edge_at(e)) == g->source(edge_at(f)) && g->range(edge_at(f)) == vertex_at(w);
        sizes.push_back(rep.blocks[w].rows());
        v.require(rep.blocks[w].rows() == column && column == brute, "block size disagrees with path counts");
    }
    v.require(sizes == std::vector<std::size_t>{8, 5}, "block sizes are not 8 and 5");
    if (v.passed) v.note = "block sizes 8 (v1) and 5 (v2)";
    return v;
}

Verdict ac4(const Graphs& gs) {
    Verdict v;
    Rng rng(seed);
    for (const auto& g : gs.samples()) {
        for (int t = 0; t < 50; ++t) {
            const auto u = random_block_unitary<Q>(g, rng, UnitaryShape::Mixed);
            const auto w = random_block_unitary<Q>(g, rng, UnitaryShape::Mixed);
            const Endomorphism<Q> lu(u), lw(w), luw(compose_quasifree(u, w)), lu_star(u.adjoint());
            for (std::size_t i = 0; i < g->edge_count(); ++i) {
                const EQ s = EQ::edge(g, edge_at(i));
                v.require(equals(luw(s), lu(lw(s))), "lambda_uw differs from lambda_u lambda_w");
                v.require(equals(lu_star(lu(s)), s), "lambda_u* lambda_u is not the identity");
            }
            for (std::size_t i = 0; i < g->vertex_count(); ++i) {
                const EQ p = EQ::vertex(g, vertex_at(i));
                v.require(equals(luw(p), lu(lw(p))) && equals(lu_star(lu(p)), p), "vertex projection moved");
            }
        }
    }
    if (v.passed) v.note = "50 pairs on each of 4 graphs";
    return v;
}

Verdict ac5(const Graphs& gs) {
    Verdict v;
    const auto& g = gs.o2;
    Rng rng(seed + 5);
    std::vector<Path> paths{g->vertex_path(vertex_at(0))};
    for (std::size_t l = 1; l <= 3; ++l)
        for (auto& p : g->paths_of_length(l)) paths.push_back(p);
    std::size_t checked = 0;
    for (int t = 0; t < 2; ++t) {
        const auto u = random_block_unitary<Q>(g, rng, UnitaryShape::General);
        const EQ x = u.to_element();
        auto image = [&](const Path& mu) {
            EQ out = EQ::vertex(g, mu.source());
            for (EdgeId e : mu.edges()) out = out * (x * EQ::edge(g, e));
            return out;
        };
        for (const auto& mu : paths)
            for (const auto& nu : paths) {
                v.require(equals(lambda_apply(u, EQ::term(g, mu, nu)), image(mu) * image(nu).adjoint()),
                          "lambda disagrees with generator images on " + g->path_to_string(mu) + "," +
                              g->path_to_string(nu));
                ++checked;
            }
    }
    if (v.passed) v.note = std::to_string(checked) + " terms S_mu S_nu^* checked";
    return v;
}

bool conjugation_oracle(const BlockUnitary<Q>& u) {
    const auto& g = u.graph_ptr();
    const EQ x = u.to_element();
    for (std::size_t i = 0; i < g->edge_count(); ++i) {
        const EQ s = EQ::edge(g, edge_at(i));
        const EQ p = s * s.adjoint();
        if (!is_member(x * p * x.adjoint(), Membership::diagonal(1))) return true;
        if (!is_member(x.adjoint() * p * x, Membership::diagonal(1))) return true;
    }
    return false;
}

Verdict ac6(const Graphs& gs) {
    Verdict v;
    Rng rng(seed + 6);
    std::size_t disagreements = 0, non_monomial = 0;
    for (const auto& g : gs.samples()) {
        for (int t = 0; t < 100; ++t) {
            const auto shape = t % 2 ? UnitaryShape::General : UnitaryShape::Monomial;
            const auto u = random_block_unitary<Q>(g, rng, shape);
            const bool verdict = hypothesis_check(u).holds;
            disagreements += verdict != conjugation_oracle(u);
            non_monomial += verdict;
        }
    }
    v.require(disagreements == 0, std::to_string(disagreements) + " disagreements");
    if (v.passed) v.note = "400 unitaries, " + std::to_string(non_monomial) + " non-monomial, 0 disagreements";
    return v;
}

Verdict ac7(const Graphs&) {
    Verdict v;
    Environment<Q> env;
    env.graphs.emplace("E", load("two_vertex.graph"));
    env.graphs.emplace("O2", load("o2t.graph"));
    auto resolve = [&](const std::string& name) { return env.graphs.at(name); };
    for (const char* file : {"two_vertex_to_o2.map", "o2_to_two_vertex.map"})
        for (auto& m : parse_map_text<Q>(read_file(data_dir / file), resolve)) env.maps.emplace(m.name, std::move(m.map));
    auto& phi = env.maps.at("phi");
    auto& psi = env.maps.at("psi");
    const auto& e = env.graphs.at("E");
    const auto& o = env.graphs.at("O2");

    v.require(verify_homomorphism(phi).passed(), "forward substitutions violate E's relations in O2");
    v.require(verify_homomorphism(psi).passed(), "inverse formulas violate the O2 relations in E");
    for (std::size_t i = 0; i < e->edge_count(); ++i) {
        const EQ s = EQ::edge(e, edge_at(i));
        v.require(equals(psi.apply(phi.apply(s)), s), "inverse does not fix S_" + e->edge_name(edge_at(i)));
    }
    for (std::size_t i = 0; i < e->vertex_count(); ++i) {
        const EQ p = EQ::vertex(e, vertex_at(i));
        v.require(equals(psi.apply(phi.apply(p)), p), "inverse does not fix P_" + e->vertex_name(vertex_at(i)));
    }
    for (std::size_t i = 0; i < o->edge_count(); ++i) {
        const EQ t = EQ::edge(o, edge_at(i));
        v.require(equals(phi.apply(psi.apply(t)), t), "forward map does not fix T_" + o->edge_name(edge_at(i)));
    }
    v.require(verify_diagonal_carry(phi, 2).holds, "diagonal not carried to level 2");

    const auto units = parse_unitary_text<Q>(read_file(data_dir / "two_vertex.unitary"), resolve);
    v.require(units.size() == 1 && hypothesis_check(units.front().unitary).holds, "hypothesis fails for xi");
    if (v.passed) v.note = "forward/inverse maps verified, diagonal carried to k=2, hypothesis holds";
    return v;
}

double hermitian_norm(Complex a, Complex b, Complex d) {
    const double mean = (a.real() + d.real()) / 2;
    const double radius = std::sqrt(std::pow((a.real() - d.real()) / 2, 2) + std::norm(b));
    return std::max(std::abs(mean + radius), std::abs(mean - radius));
}

Verdict ac8(const Graphs& gs) {
    Verdict v;
    const auto& g = gs.o2;
    const auto vertex = *g->find_vertex("v");
    const auto had = parse_unitary_text<Complex>(read_file(data_dir / "hadamard.unitary"),
                                                 [&](const std::string&) { return g; });
    const auto& u = had.front().unitary;
    const EC p = EC::edge(g, *g->find_edge("e1")) * EC::edge(g, *g->find_edge("e1")).adjoint();
    const auto result = compute_delta(u, p, vertex);

    // oracle: all four diagonal projections q against the eigenvalues of u p u^* - q
    const EC x = u.to_element();
    const auto m = represent(x * p * x.adjoint(), 1).blocks[0];
    double oracle = INFINITY;
    for (int q1 = 0; q1 <= 1; ++q1)
        for (int q2 = 0; q2 <= 1; ++q2)
            oracle = std::min(oracle, hermitian_norm(m(0, 0) - double(q1), m(0, 1), m(1, 1) - double(q2)));
    v.require(std::abs(result.value - delta_expected) <= delta_tolerance, "Hadamard delta off target");
    v.require(std::abs(oracle - delta_expected) <= delta_tolerance, "oracle delta off target");

    const auto flip = parse_unitary_text<Q>(read_file(data_dir / "o2.unitary"), [&](const std::string&) { return g; });
    const auto flip_delta = compute_delta(flip.front().unitary, range_projection(g, "e1"), vertex);
    v.require(flip_delta.value == 0.0 && flip_delta.conjugate_in_diagonal, "flip delta is not exactly 0");

    std::ostringstream note;
    note << std::setprecision(9) << "Hadamard delta = " << result.value << ", oracle " << oracle << ", flip delta = 0";
    if (v.passed) v.note = note.str();
    return v;
}

Verdict ac9(const Graphs& gs) {
    Verdict v;
    auto sizes = [](const Graph& g) {
        std::vector<std::size_t> out;
        for (const auto& b : block_structure_report(g)) out.push_back(b.multiplicity);
        std::sort(out.begin(), out.end());
        return out;
    };
    v.require(sizes(*gs.rose) == std::vector<std::size_t>{2}, "E does not have one 2x2 block");
    v.require(sizes(*gs.split) == std::vector<std::size_t>{1, 1, 1, 1}, "F does not have four 1x1 blocks");
    if (v.passed)
        v.note = "E: " + unitary_group_summary(block_structure_report(*gs.rose)) +
                 ", F: " + unitary_group_summary(block_structure_report(*gs.split));
    return v;
}

Verdict ac10(const Graphs& gs) {
    Verdict v;
    std::size_t checks = 0;
    for (const auto& g : gs.samples()) {
        Rng rng(seed + 10);
        for (const auto& law : check_algebra_laws<Q>(g, rng, 20)) {
            checks += law.checked;
            v.require(law.failed == 0, law.name + ": " + law.counterexample);
        }
    }
    if (v.passed) v.note = std::to_string(checks) + " law instances, 20 trials per graph";
    return v;
}

Verdict ac11(const Graphs& gs) {
    Verdict v;
    Rng rng(seed + 11);
    std::size_t splits = 0;
    for (const auto& g : gs.samples()) {
        const bool standing = g->validate_standing_assumption().holds();
        for (int t = 0; t < 20; ++t) {
            const auto part = random_partition(g, rng);
            const auto f = out_split(part).graph;
            auto map = induced_images<Q>(g, f, part);
            v.require(verify_homomorphism(map).passed(), "induced map is not a homomorphism");
            v.require(verify_diagonal_carry(map, 3).holds, "diagonal not carried to level 3");
            v.require(f->validate_standing_assumption().holds() == standing, "standing assumption not preserved");
            ++splits;
        }
    }
    if (v.passed) v.note = std::to_string(splits) + " random out-splittings";
    return v;
}

struct Criterion {
    const char* id;
    const char* title;
    double limit_s;
    std::function<Verdict(const Graphs&)> run;
};

}  // namespace

int main() {
    const Graphs graphs;
    const std::vector<Criterion> criteria = {
        {"AC1", "relation suite", 1, ac1},
        {"AC2", "matrix-unit law, k <= 2", 10, ac2},
        {"AC3", "representation dimensions", 1, ac3},
        {"AC4", "quasi-free group law", 30, ac4},
        {"AC5", "lambda vs generator images", 30, ac5},
        {"AC6", "hypothesis-check oracle", 60, ac6},
        {"AC7", "O2 identification end to end", 10, ac7},
        {"AC8", "delta computation", 1, ac8},
        {"AC9", "U(B) block structure", 1, ac9},
        {"AC10", "structure-map laws", 60, ac10},
        {"AC11", "out-split verification", 60, ac11},
    };

    bool all = true;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.run(graphs);
        } catch (const std::exception& ex) {
            v.passed = false;
            v.note = std::string("exception: ") + ex.what();
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (v.passed && seconds > c.limit_s) {
            v.passed = false;
            v.note = "over the time limit";
        }
        all = all && v.passed;
        std::cout << std::left << std::setw(5) << c.id << (v.passed ? "PASS " : "FAIL ") << std::setw(30) << c.title
                  << std::right << std::fixed << std::setprecision(3) << std::setw(8) << seconds << " s / "
                  << std::setprecision(0) << c.limit_s << " s  " << v.note << "\n";
    }
    return all ? 0 : 1;
}
