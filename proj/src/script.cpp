#include "ckalg/script.hpp"

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <openssl/evp.h>

#include "ckalg/dsl.hpp"
#include "ckalg/errors.hpp"
#include "ckalg/formats.hpp"
#include "ckalg/graph_moves.hpp"
#include "ckalg/structure_maps.hpp"

namespace ckalg {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class LawRecorder {
public:
    void record(const std::string& law, bool ok, const std::function<std::string()>& describe) {
        auto it = index_.find(law);
        if (it == index_.end()) {
            it = index_.emplace(law, results_.size()).first;
            results_.push_back({law});
        }
        auto& r = results_[it->second];
        ++r.checked;
        if (!ok && r.failed++ == 0) r.counterexample = describe();
    }

    std::vector<LawResult> take() { return std::move(results_); }

private:
    std::vector<LawResult> results_;
    std::map<std::string, std::size_t> index_;
};

template <class K>
std::string describe(std::initializer_list<std::pair<const char*, const Element<K>*>> named) {
    std::string out;
    for (const auto& [name, x] : named) {
        if (!out.empty()) out += "; ";
        out += std::string(name) + " = " + format_element(*x);
    }
    return out;
}

json check_to_json(const std::string& name, bool passed) { return {{"name", name}, {"passed", passed}}; }

json laws_to_json(const std::vector<LawResult>& laws) {
    json out = json::array();
    for (const auto& law : laws) {
        json entry = {{"name", law.name}, {"checked", law.checked}, {"failed", law.failed}};
        if (law.failed) entry["counterexample"] = law.counterexample;
        out.push_back(std::move(entry));
    }
    return out;
}

std::string trimmed(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

/// An error inside a loaded file, reported against the script statement.
UsageError file_error(const std::string& file, const ParseError& err) {
    return UsageError(file + (err.line() ? ":" + std::to_string(err.line()) : "") + ": " + err.bare_message());
}

template <class K>
class Runner {
public:
    Runner(std::string name, fs::path base, const RunOptions& options)
        : name_(std::move(name)),
          base_(std::move(base)),
          options_(options),
          out_(options.out ? *options.out : std::cout),
          err_(options.err ? *options.err : std::cerr) {}

    RunOutcome run(std::string_view text) {
        RunOutcome outcome;
        json statements = json::array();
        inputs_.push_back({{"path", name_}, {"sha256", sha256_hex(text)}});

        std::size_t line_no = 0;
        std::size_t start = 0;
        while (start <= text.size() && outcome.exit_code != exit_usage) {
            auto end = text.find('\n', start);
            if (end == std::string_view::npos) end = text.size();
            const std::string_view line = text.substr(start, end - start);
            start = end + 1;
            ++line_no;

            Cursor cur(line, line_no);
            if (cur.at_end()) continue;
            json record = {{"index", statements.size()}, {"line", line_no}, {"text", trimmed(line)}};
            const auto t0 = std::chrono::steady_clock::now();
            try {
                record["kind"] = "statement";
                execute(cur, record, statements.size());
                if (!cur.at_end()) cur.fail("unexpected '" + std::string(1, cur.peek()) + "' at end of statement");
            } catch (const std::exception& ex) {
                const auto* parse = dynamic_cast<const ParseError*>(&ex);
                const std::string message = parse ? parse->bare_message() : ex.what();
                record["status"] = "error";
                record["error"] = message;
                err_ << name_ << ":" << line_no << ": error: " << message << "\n";
                outcome.exit_code = exit_usage;
            }
            if (!env_.warnings.empty()) {
                record["warnings"] = env_.warnings;
                for (const auto& w : env_.warnings) err_ << name_ << ":" << line_no << ": warning: " << w << "\n";
                env_.warnings.clear();
            }
            if (options_.timing)
                record["timing_ms"] =
                    std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
            if (record.value("status", "") == "fail" && outcome.exit_code == exit_ok) outcome.exit_code = exit_failed;
            statements.push_back(std::move(record));
        }

        out_ << name_ << ": " << statements.size() << " statements, " << checks_ << " checks, " << failures_
             << " failed" << (outcome.exit_code == exit_usage ? ", stopped on error" : "") << "\n";

        outcome.report = report_header(ScalarTraits<K>::mode_name, options_.seed);
        outcome.report["script"] = name_;
        outcome.report["inputs"] = inputs_;
        outcome.report["statements"] = std::move(statements);
        outcome.report["summary"] = {{"checks", checks_}, {"failed", failures_}, {"exit_code", outcome.exit_code}};

        const auto path = options_.report_path ? options_.report_path : report_path_;
        if (path) write_report(outcome.report, *path);
        return outcome;
    }

private:
    void execute(Cursor& cur, json& record, std::size_t index) {
        const std::string keyword = cur.id("statement keyword");
        record["kind"] = keyword;
        if (keyword == "load") return load(cur, record);
        if (keyword == "use") {
            cur.expect("graph");
            env_.active = graph(cur.id("graph name"));
            record["status"] = "ok";
            return;
        }
        if (keyword == "let") {
            const std::string name = cur.id("name");
            env_.check_new_name(name);
            cur.expect("=");
            Value<K> v = evaluate(cur, env_);
            record["status"] = "ok";
            record["result"] = value_to_json(v, env_);
            env_.variables.emplace(name, std::move(v));
            return;
        }
        if (keyword == "eval") {
            Value<K> v = evaluate(cur, env_);
            record["status"] = "ok";
            record["result"] = value_to_json(v, env_);
            out_ << name_ << ":" << record["line"].get<std::size_t>() << ": " << format_value(v, env_) << "\n";
            return;
        }
        if (keyword == "assert") return assertion(cur, record);
        if (keyword == "verify") return verify(cur, record, index);
        if (keyword == "outsplit") return outsplit(cur, record);
        if (keyword == "blocks") {
            const GraphPtr g = optional_graph(cur);
            const auto blocks = block_structure_report(*g);
            json list = json::array();
            for (const auto& b : blocks)
                list.push_back({{"from", g->vertex_name(b.from)}, {"to", g->vertex_name(b.to)},
                                {"multiplicity", b.multiplicity}});
            const std::string summary = unitary_group_summary(blocks);
            record["status"] = "ok";
            record["result"] = {{"blocks", list}, {"summary", summary}};
            out_ << name_ << ":" << record["line"].get<std::size_t>() << ": U(B) of " << env_.graph_name(g) << " = "
                 << summary << "\n";
            return;
        }
        if (keyword == "report") {
            report_path_ = resolve(cur.quoted());
            record["status"] = "ok";
            return;
        }
        throw UsageError("unknown statement '" + keyword + "'");
    }

    fs::path resolve(const std::string& path) const {
        fs::path p(path);
        return p.is_relative() ? base_ / p : p;
    }

    std::string load_input(const std::string& path) {
        std::string text = read_file(resolve(path));
        inputs_.push_back({{"path", path}, {"sha256", sha256_hex(text)}});
        return text;
    }

    GraphPtr graph(const std::string& name) const {
        auto it = env_.graphs.find(name);
        if (it == env_.graphs.end()) throw UsageError("unknown graph '" + name + "'");
        return it->second;
    }

    GraphPtr optional_graph(Cursor& cur) const {
        if (cur.peek_id()) return graph(cur.id("graph name"));
        if (!env_.active) throw UsageError("no graph is active; add 'use graph <name>'");
        return env_.active;
    }

    GraphResolver resolver() const {
        return [this](const std::string& name) -> GraphPtr {
            auto it = env_.graphs.find(name);
            return it == env_.graphs.end() ? nullptr : it->second;
        };
    }

    void add_graph(const std::string& name, GraphPtr g) {
        if (env_.graphs.count(name)) throw UsageError("graph '" + name + "' is already defined");
        if (!env_.active) env_.active = g;
        env_.graphs.emplace(name, std::move(g));
    }

    void load(Cursor& cur, json& record) {
        const std::string what = cur.id("'graph', 'unitary', 'map' or 'partition'");
        json defined = json::array();
        if (what == "graph") {
            const std::string name = cur.id("graph name");
            const std::string path = cur.quoted();
            GraphPtr g;
            try {
                g = parse_graph_text(load_input(path));
            } catch (const ParseError& err) {
                throw file_error(path, err);
            }
            add_graph(name, g);
            defined.push_back(name);
            record["result"] = {{"vertices", g->vertex_count()}, {"edges", g->edge_count()}};
        } else if (what == "unitary") {
            const std::string path = cur.quoted();
            std::vector<NamedUnitary<K>> unitaries;
            try {
                unitaries = parse_unitary_text<K>(load_input(path), resolver());
            } catch (const ParseError& err) {
                throw file_error(path, err);
            }
            for (auto& u : unitaries) {
                env_.check_new_name(u.name);
                defined.push_back(u.name);
                env_.variables.emplace(u.name, std::move(u.unitary));
            }
        } else if (what == "map") {
            const std::string path = cur.quoted();
            std::vector<NamedMap<K>> maps;
            try {
                maps = parse_map_text<K>(load_input(path), resolver());
            } catch (const ParseError& err) {
                throw file_error(path, err);
            }
            for (auto& m : maps) {
                env_.check_new_name(m.name);
                defined.push_back(m.name);
                env_.maps.emplace(m.name, std::move(m.map));
            }
        } else if (what == "partition") {
            const std::string name = cur.id("partition name");
            const std::string path = cur.quoted();
            cur.expect("on");
            const GraphPtr g = graph(cur.id("graph name"));
            if (env_.partitions.count(name)) throw UsageError("partition '" + name + "' is already defined");
            try {
                env_.partitions.emplace(name, parse_partition_text(load_input(path), g));
            } catch (const ParseError& err) {
                throw file_error(path, err);
            }
            defined.push_back(name);
        } else {
            throw UsageError("cannot load '" + what + "'; expected graph, unitary, map or partition");
        }
        record["status"] = "ok";
        record["defined"] = defined;
    }

    void finish_check(json& record, bool passed) {
        ++checks_;
        if (!passed) ++failures_;
        record["status"] = passed ? "pass" : "fail";
    }

    void assertion(Cursor& cur, json& record) {
        std::optional<Comparison<K>> comparison;
        const std::size_t line = record["line"].get<std::size_t>();
        Value<K> v = evaluate(cur, env_, &comparison);
        bool passed = false;
        if (auto* b = std::get_if<bool>(&v))
            passed = *b;
        else if (auto* h = std::get_if<HypothesisValue>(&v))
            passed = h->result.holds;
        else
            throw UsageError("assert needs a boolean, got " + type_name(v));
        finish_check(record, passed);
        record["result"] = value_to_json(v, env_);
        if (passed) return;

        out_ << name_ << ":" << line << ": assertion failed: " << record["text"].get<std::string>() << "\n";
        if (!comparison) return;
        record["lhs"] = value_to_json(comparison->lhs, env_);
        record["rhs"] = value_to_json(comparison->rhs, env_);
        out_ << "  lhs = " << format_value(comparison->lhs, env_) << "\n"
             << "  rhs = " << format_value(comparison->rhs, env_) << "\n";
        const bool lhs_element = std::holds_alternative<Element<K>>(comparison->lhs);
        const bool rhs_element = std::holds_alternative<Element<K>>(comparison->rhs);
        if (lhs_element && rhs_element) {
            const auto& a = std::get<Element<K>>(comparison->lhs);
            const auto& b = std::get<Element<K>>(comparison->rhs);
            if (a.graph_ptr() == b.graph_ptr()) {
                const Element<K> diff = a - b;
                record["difference"] = {{"text", format_element(diff)}, {"terms", element_to_json(diff)}};
                out_ << "  lhs - rhs = " << format_element(diff) << "\n";
            }
        }
    }

    void verify(Cursor& cur, json& record, std::size_t index) {
        const std::string what = cur.id("verification");
        record["kind"] = "verify " + what;
        const std::size_t line = record["line"].get<std::size_t>();
        bool passed = true;
        if (what == "relations") {
            const GraphPtr g = optional_graph(cur);
            json checks = json::array();
            for (const auto& [name, ok] : relation_checks(g)) {
                checks.push_back(check_to_json(name, ok));
                passed = passed && ok;
            }
            record["result"] = {{"graph", env_.graph_name(g)}, {"checks", checks}};
        } else if (what == "standing") {
            const GraphPtr g = optional_graph(cur);
            const auto report = g->validate_standing_assumption();
            passed = report.holds();
            record["result"] = {{"graph", env_.graph_name(g)},
                                {"transitive", report.transitive},
                                {"all_cycles_have_exits", report.all_cycles_have_exits},
                                {"sinks", report.sinks},
                                {"sources", report.sources}};
        } else if (what == "hom") {
            auto& map = this->map(cur.id("map name"));
            const auto report = verify_homomorphism(map);
            json checks = json::array();
            for (const auto& c : report.checks) {
                checks.push_back(check_to_json(c.name, c.passed));
                if (!c.passed) out_ << name_ << ":" << line << ": relation failed: " << c.name << "\n";
            }
            passed = report.passed();
            record["result"] = {{"checks", checks}};
        } else if (what == "diag") {
            const auto& map = this->map(cur.id("map name"));
            const std::size_t k = to_level_literal(cur);
            const auto report = verify_diagonal_carry(map, k);
            passed = report.holds;
            record["result"] = {{"level", k}, {"map_verified", report.map_verified}, {"holds", report.holds}};
            if (report.failing_path)
                record["result"]["failing_path"] = map.source()->path_to_string(*report.failing_path);
            if (!report.map_verified)
                out_ << name_ << ":" << line << ": map is not verified; run 'verify hom' first\n";
        } else if (what == "laws" || what == "quasifree") {
            const std::size_t trials = to_level_literal(cur);
            if (!env_.active) throw UsageError("no graph is active; add 'use graph <name>'");
            std::seed_seq seq{options_.seed, static_cast<std::uint64_t>(index)};
            Rng rng(seq);
            const auto laws = what == "laws" ? check_algebra_laws<K>(env_.active, rng, trials)
                                             : check_quasifree_laws<K>(env_.active, rng, trials);
            for (const auto& law : laws) {
                if (!law.failed) continue;
                passed = false;
                out_ << name_ << ":" << line << ": law failed: " << law.name << " (" << law.failed << " of "
                     << law.checked << "): " << law.counterexample << "\n";
            }
            record["result"] = {{"graph", env_.graph_name(env_.active)}, {"trials", trials}, {"laws", laws_to_json(laws)}};
        } else {
            throw UsageError("unknown verification '" + what +
                             "'; expected relations, standing, hom, diag, laws or quasifree");
        }
        finish_check(record, passed);
        out_ << name_ << ":" << line << ": " << record["kind"].get<std::string>() << ": " << (passed ? "pass" : "FAIL")
             << "\n";
    }

    std::size_t to_level_literal(Cursor& cur) {
        if (!cur.peek_number()) cur.fail("expected a non-negative integer");
        const auto lit = cur.scalar_literal();
        const auto& q = lit.exact;
        if (q.imag() != 0 || q.real().get_den() != 1 || sgn(q.real()) < 0 || !q.real().get_num().fits_ulong_p())
            cur.fail("expected a non-negative integer");
        return q.real().get_num().get_ui();
    }

    GeneratorMap<K>& map(const std::string& name) {
        auto it = env_.maps.find(name);
        if (it == env_.maps.end()) throw UsageError("unknown map '" + name + "'");
        return it->second;
    }

    std::vector<std::pair<std::string, bool>> relation_checks(const GraphPtr& g) const {
        std::vector<std::pair<std::string, bool>> checks;
        Element<K> total(g);
        for (std::size_t i = 0; i < g->vertex_count(); ++i) {
            const VertexId v = vertex_at(i);
            const auto pv = Element<K>::vertex(g, v);
            for (std::size_t j = i + 1; j < g->vertex_count(); ++j)
                checks.emplace_back("P(" + g->vertex_name(v) + ") P(" + g->vertex_name(vertex_at(j)) + ") = 0",
                                    (pv * Element<K>::vertex(g, vertex_at(j))).is_zero());
            total += pv;
        }
        checks.emplace_back("sum of P(v) = 1", equals(total, Element<K>::identity(g)));
        for (std::size_t i = 0; i < g->edge_count(); ++i) {
            const EdgeId e = edge_at(i);
            const auto s = Element<K>::edge(g, e);
            checks.emplace_back("GA1 " + g->edge_name(e),
                                (s.adjoint() * s - Element<K>::vertex(g, g->range(e))).is_zero());
        }
        for (std::size_t i = 0; i < g->vertex_count(); ++i) {
            const VertexId v = vertex_at(i);
            if (g->out_edges(v).empty()) continue;
            Element<K> sum = -Element<K>::vertex(g, v);
            for (EdgeId e : g->out_edges(v)) sum += Element<K>::edge(g, e) * Element<K>::edge(g, e).adjoint();
            checks.emplace_back("GA2 " + g->vertex_name(v), sum.is_zero());
        }
        return checks;
    }

    void outsplit(Cursor& cur, json& record) {
        const std::string name = cur.id("new graph name");
        cur.expect("=");
        const std::string base_name = cur.id("graph name");
        const GraphPtr g = graph(base_name);
        cur.expect("by");
        const std::string part_name = cur.id("partition name");
        auto it = env_.partitions.find(part_name);
        if (it == env_.partitions.end()) throw UsageError("unknown partition '" + part_name + "'");
        if (it->second.graph_ptr() != g)
            throw UsageError("partition '" + part_name + "' was loaded for another graph");
        std::optional<std::string> map_name;
        if (cur.consume("map")) {
            map_name = cur.id("map name");
            env_.check_new_name(*map_name);
        }
        const auto split = out_split(it->second);
        add_graph(name, split.graph);
        record["result"] = {{"vertices", split.graph->vertex_count()},
                            {"edges", split.graph->edge_count()},
                            {"graph", split.graph->to_text()}};
        if (map_name) {
            env_.maps.emplace(*map_name, induced_images<K>(g, split.graph, it->second));
            record["result"]["map"] = *map_name;
        }
        record["status"] = "ok";
    }

    std::string name_;
    fs::path base_;
    const RunOptions& options_;
    std::ostream& out_;
    std::ostream& err_;
    Environment<K> env_;
    json inputs_ = json::array();
    std::optional<fs::path> report_path_;
    std::size_t checks_ = 0;
    std::size_t failures_ = 0;
};

template <class K>
K unit_phase(std::size_t which) {
    static const GaussianRational phases[] = {
        GaussianRational(mpq_class(3, 5), mpq_class(4, 5)),
        GaussianRational(0, 1),
        GaussianRational(mpq_class(-5, 13), mpq_class(12, 13)),
    };
    return ScalarTraits<K>::from_exact(phases[which % 3]);
}

}  // namespace

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr);
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < length; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xf];
    }
    return out;
}

json report_header(const std::string& mode, std::uint64_t seed) {
    return {{"schema", report_schema},
            {"tool", {{"name", tool_name}, {"version", tool_version}}},
            {"mode", mode},
            {"seed", seed}};
}

void write_report(const json& report, const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write report '" + path.string() + "'");
    out << report.dump(2) << "\n";
}

template <class K>
RunOutcome run_script_text(std::string_view text, const std::string& name, const fs::path& base,
                           const RunOptions& options) {
    return Runner<K>(name, base, options).run(text);
}

template <class K>
RunOutcome run_script(const fs::path& script, const RunOptions& options) {
    const std::string text = read_file(script);
    return run_script_text<K>(text, script.string(), script.parent_path(), options);
}

template <class K>
std::vector<LawResult> check_algebra_laws(const GraphPtr& g, Rng& rng, std::size_t trials) {
    using E = Element<K>;
    LawRecorder laws;
    for (std::size_t k = 0; k <= 3; ++k) {
        const E one = E::identity(g);
        laws.record("expF(1, k) = 1", equals(expect_core_level(one, k), one),
                    [k] { return "k = " + std::to_string(k); });
    }
    for (std::size_t t = 0; t < trials; ++t) {
        const E x = random_element<K>(g, rng, 4, 2);
        const E y = random_element<K>(g, rng, 4, 2);
        const E z = random_element<K>(g, rng, 4, 2);
        auto xyz = [&] { return describe<K>({{"x", &x}, {"y", &y}, {"z", &z}}); };
        laws.record("associativity", equals((x * y) * z, x * (y * z)), xyz);
        laws.record("distributivity", equals(x * (y + z), x * y + x * z) && equals((x + y) * z, x * z + y * z),
                    xyz);
        laws.record("adjoint is an anti-multiplicative involution",
                    equals((x * y).adjoint(), y.adjoint() * x.adjoint()) && equals(x.adjoint().adjoint(), x), xyz);
        const K c = ScalarTraits<K>::from_exact(random_coefficient(rng));
        laws.record("adjoint is conjugate-linear", equals((c * x).adjoint(), ScalarTraits<K>::conj(c) * x.adjoint()),
                    xyz);
        laws.record("vertex projections act as the identity", equals(E::identity(g) * x, x) &&
                                                                   equals(x * E::identity(g), x),
                    xyz);

        const E wide = random_element<K>(g, rng, 3, 3);
        {
            const std::size_t k = t % 3;
            const E a = random_core_element<K>(g, rng, k, 3);
            const E b = random_core_element<K>(g, rng, k, 3);
            const E ex = degree_component(wide, 0);
            laws.record("comp(., 0) idempotent and F-bimodular",
                        equals(degree_component(ex, 0), ex) && equals(degree_component(a * wide * b, 0), a * ex * b),
                        [&] { return describe<K>({{"x", &wide}, {"a", &a}, {"b", &b}}); });
        }
        {
            const E a = random_diagonal_element<K>(g, rng, t % 3, 3);
            const E b = random_diagonal_element<K>(g, rng, (t + 1) % 3, 3);
            const E ex = expect_diagonal(wide);
            laws.record("expD idempotent and D-bimodular",
                        equals(expect_diagonal(ex), ex) && equals(expect_diagonal(a * wide * b), a * ex * b),
                        [&] { return describe<K>({{"x", &wide}, {"a", &a}, {"b", &b}}); });
        }
        for (std::size_t k = 0; k <= 3; ++k) {
            const E a = random_core_element<K>(g, rng, k, 2);
            const E b = random_core_element<K>(g, rng, k, 2);
            const E ex = expect_core_level(wide, k);
            laws.record("expF(., k) idempotent and F^k-bimodular",
                        is_member(ex, Membership::core(static_cast<int>(k))) && equals(expect_core_level(ex, k), ex) &&
                            equals(expect_core_level(a * wide * b, k), a * ex * b),
                        [&] { return "k = " + std::to_string(k) + "; " + describe<K>({{"x", &wide}, {"a", &a}, {"b", &b}}); });
        }
        laws.record("comp(x, m)^* = comp(x^*, -m)",
                    equals(degree_component(x, 1).adjoint(), degree_component(x.adjoint(), -1)) &&
                        equals(degree_component(x, 0).adjoint(), degree_component(x.adjoint(), 0)),
                    xyz);

        const K zeta = unit_phase<K>(t);
        const K omega = unit_phase<K>(t + 1);
        laws.record("gauge is a *-homomorphism and an action",
                    equals(gauge(x * y, zeta), gauge(x, zeta) * gauge(y, zeta)) &&
                        equals(gauge(x.adjoint(), zeta), gauge(x, zeta).adjoint()) &&
                        equals(gauge(gauge(x, zeta), omega), gauge(x, zeta * omega)),
                    xyz);

        const E p = random_block_element<K>(g, rng, 4);
        const E q = random_block_element<K>(g, rng, 4);
        laws.record("shift is multiplicative and *-preserving on B",
                    equals(shift(p * q), shift(p) * shift(q)) && equals(shift(p.adjoint()), shift(p).adjoint()),
                    [&] { return describe<K>({{"x", &p}, {"y", &q}}); });

        const E u = random_block_unitary<K>(g, rng, UnitaryShape::Mixed).to_element();
        const E phi_u = shift(u);
        bool commutes = true;
        for (std::size_t e = 0; e < g->edge_count(); ++e) {
            const E s = E::edge(g, edge_at(e));
            commutes = commutes && equals(s * u, phi_u * s);
        }
        laws.record("S_e u = shift(u) S_e for u in U(B)", commutes, [&] { return describe<K>({{"u", &u}}); });
    }
    return laws.take();
}

template <class K>
std::vector<LawResult> check_quasifree_laws(const GraphPtr& g, Rng& rng, std::size_t trials) {
    using E = Element<K>;
    LawRecorder laws;
    for (std::size_t t = 0; t < trials; ++t) {
        const auto u = random_block_unitary<K>(g, rng, UnitaryShape::Mixed);
        const auto w = random_block_unitary<K>(g, rng, UnitaryShape::Mixed);
        const auto v = random_block_unitary<K>(g, rng, UnitaryShape::Mixed);
        const E ue = u.to_element(), we = w.to_element();
        auto uw_text = [&] { return describe<K>({{"u", &ue}, {"w", &we}}); };

        const Endomorphism<K> lu(u), lw(w), luw(compose_quasifree(u, w)), lu_inv(u.adjoint());
        bool group = true, inverse = true, vertices = true;
        for (std::size_t e = 0; e < g->edge_count(); ++e) {
            const E s = E::edge(g, edge_at(e));
            group = group && equals(luw(s), lu(lw(s)));
            inverse = inverse && equals(lu_inv(lu(s)), s) && equals(lu(lu_inv(s)), s);
        }
        for (std::size_t i = 0; i < g->vertex_count(); ++i) {
            const E p = E::vertex(g, vertex_at(i));
            vertices = vertices && equals(lu(p), p);
        }
        laws.record("lambda(uw) = lambda(u) lambda(w) on generators", group, uw_text);
        laws.record("lambda(u^*) inverts lambda(u) on generators", inverse, uw_text);
        laws.record("lambda(u) fixes every P(v)", vertices, uw_text);
        laws.record("compose is associative",
                    equals(compose_quasifree(compose_quasifree(u, w), v).to_element(),
                           compose_quasifree(u, compose_quasifree(w, v)).to_element()),
                    uw_text);

        const E x = random_element<K>(g, rng, 3, 2);
        const E y = random_element<K>(g, rng, 3, 2);
        laws.record("lambda(u) is a *-homomorphism",
                    equals(lu(x * y), lu(x) * lu(y)) && equals(lu(x.adjoint()), lu(x).adjoint()),
                    [&] { return describe<K>({{"u", &ue}, {"x", &x}, {"y", &y}}); });
        laws.record("lambda(u)(w) = u w u^* for w in B", equals(lu(we), ue * we * ue.adjoint()), uw_text);
    }
    return laws.take();
}

#define CKALG_INSTANTIATE(K)                                                                              \
    template RunOutcome run_script_text<K>(std::string_view, const std::string&, const fs::path&,          \
                                           const RunOptions&);                                            \
    template RunOutcome run_script<K>(const fs::path&, const RunOptions&);                                \
    template std::vector<LawResult> check_algebra_laws<K>(const GraphPtr&, Rng&, std::size_t);            \
    template std::vector<LawResult> check_quasifree_laws<K>(const GraphPtr&, Rng&, std::size_t);

CKALG_INSTANTIATE(GaussianRational)
CKALG_INSTANTIATE(Complex)

#undef CKALG_INSTANTIATE

}  // namespace ckalg
