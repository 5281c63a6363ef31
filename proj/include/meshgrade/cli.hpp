#ifndef MESHGRADE_CLI_HPP
#define MESHGRADE_CLI_HPP

#include <iosfwd>

namespace meshgrade {

// Full command-line surface, testable without a process boundary. Progress
// and errors go to err; data goes to out only when --stdout is passed.
// Returns the process exit status: 0 iff no error finding was produced.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace meshgrade

#endif
