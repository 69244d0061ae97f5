#pragma once

#include <string>
#include <vector>

namespace hpin {

// Dispatches one toolkit command (annealed | quenched | scan | walkprob |
// certify | oracle-check | fit-singularity).  `args` excludes the program
// name.  Returns 0 on success, 1 on domain/bracket/IO errors, 2 on usage
// errors.
int run_command(const std::vector<std::string>& args);

}  // namespace hpin
