#pragma once

#include "folwerk/dsl.hpp"

#include "json.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace folwerk {

using Json = nlohmann::ordered_json;

struct RunOptions {
    std::optional<Window> window; ///< --window, overrides the file's `window` statement
    bool trace = false;           ///< include rewrite traces of mate checks
    bool parallel = false;
};

struct Report {
    std::size_t index = 0;
    std::string file_name; ///< e.g. "003-W-points.json"
    bool passed = false;
    std::optional<ErrorKind> error;
    std::string summary;   ///< one line for the console
    Json json;
};

enum ExitCode : int { AllPassed = 0, CheckFailed = 1, BadInput = 2, OverBudget = 3 };

ExitCode exit_code_for(ErrorKind kind);

/// Runs the workspace's checks in file order (concurrently with `parallel`,
/// results still in order). Module errors become failing reports carrying
/// the error.
std::vector<Report> run_checks(const Workspace& ws, const RunOptions& options);

/// Errors dominate failures: any input error gives 2, else any budget overrun
/// gives 3, else any failure gives 1.
ExitCode exit_code(const std::vector<Report>& reports);

/// Fixed formatting: two-space indent, trailing newline.
std::string dump(const Json& j);

/// One file per report, each written to a temporary name and renamed.
void write_reports(const std::vector<Report>& reports, const std::filesystem::path& dir);

/// Window overrides written "w=3,d=4" (either part may be omitted).
Window parse_window(const std::string& text);

/// `folwerk check`: parse, run, print one line per check on `out` and errors
/// on `err`, write reports and the run-meta.json sidecar when `json_dir` is set.
ExitCode check_file(const std::filesystem::path& file, const RunOptions& options,
                    const std::optional<std::filesystem::path>& json_dir, std::ostream& out, std::ostream& err);

/// `folwerk dsl`: prints to_dsl of the named declaration's graded mixed algebra.
ExitCode print_dsl(const std::filesystem::path& file, const std::string& name, std::ostream& out, std::ostream& err);

} // namespace folwerk
