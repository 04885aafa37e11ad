#include "bsfh/cli.hpp"

#include <ostream>

namespace bsfh::cli {

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  (void)args;
  (void)out;
  err << "bsfh: not yet implemented\n";
  return 2;
}

}  // namespace bsfh::cli
