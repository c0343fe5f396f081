#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace uaext::cli {

/// Exit codes: 0 every requested check passed, 1 a check failed (the report
/// is still written), 2 input or usage error, 3 computational failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace uaext::cli
