#pragma once

#include <ostream>

namespace srdt {

// Exit codes: 0 success, 2 usage or config error, 3 capacity exceeded,
// 1 anything else.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace srdt
