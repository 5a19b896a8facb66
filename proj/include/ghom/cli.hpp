#ifndef GHOM_CLI_HPP
#define GHOM_CLI_HPP

namespace ghom {

/// Entry point for the `ghom` command-line tool. Returns the process exit
/// code: 0 success, 2 configuration error, 3 numerical failure, 4 failed
/// assumption check under --strict.
int cli_main(int argc, const char* const* argv);

}  // namespace ghom

#endif
