#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace envforge {

/// Command-line driver, callable in-process for tests. `args` excludes the
/// program name. Exit codes: 0 ok, 1 qualified result (e.g. non-unique
/// envelope, masked samples), 2 negative result (not creative, verification
/// failure, disagreement), 64 usage or scene validation error, 65 data or
/// runtime failure. Set ENVFORGE_LOG for diagnostics on `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace envforge
