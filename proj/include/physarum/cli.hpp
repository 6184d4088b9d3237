#pragma once

#include <ostream>

namespace physarum {

/// Entry point of the `physarum` tool. Returns 0 on success, 1 on a domain
/// error, 2 on a usage error; diagnostics go to `err` as one line.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace physarum
