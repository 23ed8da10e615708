#pragma once

namespace kex {

// Entry point behind the kex binary. Subcommands:
//   run <config>      full experiment, reports under the configured dir
//   validate <config> parse and validate only
//   solve <pool>      one-shot clearing of a serialized pool
//   oracle <pool>     brute-force clearing for small pools
// Returns 0 on success, nonzero with a diagnostic on stderr otherwise.
int run_cli(int argc, const char* const* argv);

} // namespace kex
