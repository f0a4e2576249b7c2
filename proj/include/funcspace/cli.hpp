#pragma once

namespace funcspace {

/// Command-line front end. Exit codes: 0 success, 1 usage error, 2 config or
/// validation error, 3 numerical divergence.
int run_cli(int argc, const char* const* argv);

}  // namespace funcspace
