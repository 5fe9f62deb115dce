#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cohft {

// Runs one CLI job. Exit status 0 on success, 1 on validation failure
// (diagnostics on err with E-PARSE / E-LABEL / E-STABILITY / E-AXIOM
// prefixes), 2 on usage errors.
int parse_and_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cohft
