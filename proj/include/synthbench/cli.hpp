#pragma once

namespace synthbench {

// Subcommands: seed-data, generate, evaluate, bench. Exit 0 on success,
// 1 on configuration/usage errors, 2 on runtime failures. Messages go to
// stderr; data only to files.
int run_cli(int argc, const char* const* argv);

}  // namespace synthbench
