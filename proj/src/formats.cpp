#include "ckalg/formats.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

#include "ckalg/errors.hpp"
#include "ckalg/scanner.hpp"

namespace ckalg {

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto end = text.find('\n', start);
        if (end == std::string_view::npos) {
            lines.push_back(text.substr(start));
            break;
        }
        lines.push_back(text.substr(start, end - start));
        start = end + 1;
    }
    return lines;
}

}  // namespace

GraphPtr parse_graph_text(std::string_view text) {
    struct PendingEdge {
        EdgeDecl decl;
        std::size_t line;
    };
    std::vector<std::string> vertices;
    std::set<std::string> vertex_set;
    std::map<std::string, std::size_t> edge_lines;
    std::vector<PendingEdge> edges;

    const auto lines = split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::size_t line = i + 1;
        Cursor cur(lines[i], line);
        if (cur.at_end()) continue;
        if (cur.consume("vertex")) {
            auto id = cur.id("vertex id");
            if (!vertex_set.insert(id).second) cur.fail("duplicate vertex '" + id + "'");
            vertices.push_back(std::move(id));
        } else if (cur.consume("edge")) {
            auto id = cur.id("edge id");
            cur.expect(":");
            auto src = cur.id("source vertex");
            cur.expect("->");
            auto rng = cur.id("range vertex");
            if (auto [it, fresh] = edge_lines.emplace(id, line); !fresh)
                cur.fail("duplicate edge '" + id + "' (first declared on line " + std::to_string(it->second) +
                         ")");
            edges.push_back({{std::move(id), std::move(src), std::move(rng)}, line});
        } else {
            cur.fail("expected 'vertex' or 'edge'");
        }
        if (!cur.at_end()) cur.fail("unexpected text after declaration");
    }

    if (vertices.empty()) throw ParseError("graph declares no vertices", lines.size());
    std::vector<EdgeDecl> decls;
    for (auto& e : edges) {
        for (const auto* endpoint : {&e.decl.source, &e.decl.range})
            if (!vertex_set.count(*endpoint))
                throw ParseError("edge '" + e.decl.id + "' uses undeclared vertex '" + *endpoint + "'", e.line);
        decls.push_back(std::move(e.decl));
    }
    return Graph::create(std::move(vertices), std::move(decls));
}

OutSplitPartition parse_partition_text(std::string_view text, const GraphPtr& g) {
    std::map<VertexId, std::vector<std::vector<EdgeId>>> classes;
    const auto lines = split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::size_t line = i + 1;
        Cursor cur(lines[i], line);
        if (cur.at_end()) continue;
        cur.expect("split");
        const auto name = cur.id("vertex id");
        const auto v = g->find_vertex(name);
        if (!v) cur.fail("unknown vertex '" + name + "'");
        if (classes.count(*v)) cur.fail("vertex '" + name + "' is split twice");
        cur.expect(":");
        std::vector<std::vector<EdgeId>> list;
        do {
            cur.expect("{");
            auto& cls = list.emplace_back();
            if (cur.peek() != '}') {
                do {
                    const auto edge = cur.id("edge id");
                    const auto e = g->find_edge(edge);
                    if (!e) cur.fail("unknown edge '" + edge + "'");
                    cls.push_back(*e);
                } while (cur.consume(","));
            }
            cur.expect("}");
        } while (cur.consume("|"));
        if (!cur.at_end()) cur.fail("unexpected text after partition");
        try {
            OutSplitPartition::create(g, {{*v, list}});
        } catch (const UsageError& err) {
            throw ParseError(err.what(), line);
        }
        classes.emplace(*v, std::move(list));
    }
    return OutSplitPartition::create(g, std::move(classes));
}

std::string partition_to_text(const OutSplitPartition& part) {
    const Graph& g = *part.graph_ptr();
    std::string out;
    for (std::size_t i = 0; i < g.vertex_count(); ++i) {
        const VertexId v = vertex_at(i);
        if (part.class_count(v) < 2) continue;
        out += "split " + g.vertex_name(v) + " :";
        bool first_class = true;
        for (const auto& cls : part.classes(v)) {
            out += first_class ? " {" : " | {";
            first_class = false;
            for (std::size_t j = 0; j < cls.size(); ++j) out += (j ? ", " : "") + g.edge_name(cls[j]);
            out += "}";
        }
        out += "\n";
    }
    return out;
}

}  // namespace ckalg
