#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace orthojoint::cli {

// Runs one command. Output artifacts go to files named by the flags; short
// summaries go to out, and any failure is a single line on err:
//   error: <Code>: <message>
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace orthojoint::cli
