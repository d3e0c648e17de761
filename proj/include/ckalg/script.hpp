#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "ckalg/random.hpp"

namespace ckalg {

inline constexpr const char* tool_name = "ckengine";
inline constexpr const char* tool_version = "1.0.0";
inline constexpr const char* report_schema = "ckengine-report/1";

enum ExitCode : int {
    exit_ok = 0,
    exit_failed = 1,
    exit_usage = 2,
};

struct RunOptions {
    std::uint64_t seed = 0;
    /// Overrides any `report "<path>"` statement.
    std::optional<std::filesystem::path> report_path;
    /// Per-statement wall-clock times; the only non-reproducible report field.
    bool timing = true;
    std::ostream* out = nullptr;
    std::ostream* err = nullptr;
};

struct RunOutcome {
    int exit_code = exit_ok;
    nlohmann::json report;
};

/// Executes the statements of a script in order:
///
///     load graph <name> "<file>"        load unitary "<file>"
///     load map "<file>"                 load partition <name> "<file>" on <graph>
///     use graph <name>                  let <name> = <expr>
///     eval <expr>                       assert <expr>
///     verify relations [<graph>]        verify standing [<graph>]
///     verify hom <map>                  verify diag <map> <k>
///     verify laws <n>                   verify quasifree <n>
///     outsplit <new> = <graph> by <partition> [map <name>]
///     blocks [<graph>]                  report "<file>"
///
/// Exit code 0 when every assertion and verification passes, 1 when one
/// fails, 2 on a usage or parse error (execution stops there).
template <class K>
RunOutcome run_script_text(std::string_view text, const std::string& name, const std::filesystem::path& base,
                           const RunOptions& options);

template <class K>
RunOutcome run_script(const std::filesystem::path& script, const RunOptions& options);

/// Throws UsageError when the file cannot be read.
std::string read_file(const std::filesystem::path& path);

std::string sha256_hex(std::string_view data);

/// Schema, tool, mode and seed fields shared by every report.
nlohmann::json report_header(const std::string& mode, std::uint64_t seed);

/// Throws UsageError when the file cannot be written.
void write_report(const nlohmann::json& report, const std::filesystem::path& path);

/// One randomized law: how often it was checked and the first counterexample.
struct LawResult {
    std::string name;
    std::size_t checked = 0;
    std::size_t failed = 0;
    std::string counterexample;
};

/// Ring axioms, adjoint laws, expectation and shift laws on random elements of g.
template <class K>
std::vector<LawResult> check_algebra_laws(const GraphPtr& g, Rng& rng, std::size_t trials);

/// Group law, inverse and multiplicativity of λ on random block unitaries of g.
template <class K>
std::vector<LawResult> check_quasifree_laws(const GraphPtr& g, Rng& rng, std::size_t trials);

}  // namespace ckalg
