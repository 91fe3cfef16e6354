#ifndef VTMIX_CLI_HPP
#define VTMIX_CLI_HPP

// Command-line front end with the simulate / estimate / experiment / report
// subcommands.  Factored out of main() so tests can drive it in-process.

namespace vtmix {

// Exit status: 0 success, 1 usage or input error, 2 numerical failure
// (non-convergence under --strict).
int run_cli(int argc, const char* const* argv);

}  // namespace vtmix

#endif  // VTMIX_CLI_HPP
