#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bsfh::cli {

// Runs one CLI invocation. Returns 0 on success, 1 when a requested check or
// computation reports failure, 2 on usage or input errors. All output goes to
// the provided streams; output is deterministic for fixed inputs.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bsfh::cli
