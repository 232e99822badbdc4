#pragma once

namespace mplex {

// Entry point behind the mplex binary; exposed so tests can drive it.
// Exit codes: 0 success, 2 parse/input errors, 3 invalid parameters,
// 4 exact-mode cap exceeded, 1 unexpected failure.
int run_cli(int argc, const char* const* argv);

}  // namespace mplex
