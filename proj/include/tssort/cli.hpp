#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "tssort/session.hpp"

namespace tssort::cli {

/// Exit codes: 0 success, 1 runtime failure, 2 usage error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Full command line, program name first.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

/// UTF-8, one label per line; blank lines (and trailing CR) ignored. Throws
/// std::runtime_error if the file cannot be read.
std::vector<std::string> read_item_file(const std::filesystem::path& path);

/// Terminal sorting loop: shows each pair, reads `1`, `2`, `=` or `q`, and
/// prints the ranking when the budget is used up, on `q`, or at end of input.
int interactive_sort(std::span<const std::string> labels, Algorithm algorithm, std::istream& in,
                     std::ostream& out);

void print_ranking(const SortSession& session, std::span<const std::string> labels,
                   std::ostream& out);

}  // namespace tssort::cli
