#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace dynhs {

// Exit codes: 0 ok, 1 usage, 2 validation, 3 oracle error, 4 replay mismatch.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dynhs
