#pragma once

#include <json.hpp>
#include <string>
#include <vector>

namespace bdcover {

/// Outcome of one named verification step inside a report.
struct CheckResult {
    std::string name;
    std::string status;  // pass | fail | skip
    nlohmann::ordered_json payload;
};

/// Machine-readable result of one CLI invocation.  The document is
/// deterministic for a fixed argv and seed except for the timestamp.
struct ReportDocument {
    std::string command;
    nlohmann::ordered_json parameters;
    std::string timestamp;
    std::vector<CheckResult> results;

    bool all_pass() const;
    /// JSON form; the timestamp is omitted when with_timestamp is false so
    /// that two runs with the same argv and seed compare byte-identical.
    nlohmann::ordered_json to_json(bool with_timestamp = true) const;
    /// Tabular flattening: one "name <TAB> status <TAB> payload" row per
    /// check, preceded by a header row.
    std::string to_tsv() const;
};

/// Dispatch a CLI argument vector (without the program name) to the
/// matching subcommand, filling the document.  Returns the process exit
/// code: 0 when every check passes, 1 when some check fails, 2 on a usage
/// error (in which case *usage_error receives the parser message and the
/// document is left empty).
int run_command(const std::vector<std::string>& args, ReportDocument& doc,
                std::string* usage_error = nullptr);

}  // namespace bdcover
