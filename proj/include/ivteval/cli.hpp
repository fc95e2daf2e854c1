#pragma once

#include <iosfwd>
#include <set>
#include <string_view>

namespace ivt {

// Exit codes of cli_main.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitUsage = 2;

// Entry point of the `ivteval` tool:
//   recognize | detect | splits show|dump|make|validate | aggregate
// Reports go to `out` (or --out); diagnostics go to `err`.
int cli_main(int argc, const char* const* argv, std::ostream& out,
             std::ostream& err);

// Parses "94-99", "3,5,7-9" into a set of ids. Throws ivt::Error on bad
// syntax.
std::set<int> parse_id_list(std::string_view text);

}  // namespace ivt
