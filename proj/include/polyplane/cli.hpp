#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace polyplane {

// Runs one command-line invocation.  `args` excludes the program name.
// Structured results go to `out` as JSON (side files such as CSV or SVG land
// at user-supplied paths); failures go to `err` as one JSON {code, message}
// line.  Returns the process exit code: 0 on success, 1 for domain errors,
// 2 for usage errors.  Identical arguments and input files produce
// byte-identical output.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace polyplane
