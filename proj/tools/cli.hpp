#pragma once

// The mflab command-line front end as a callable, so tests can drive it
// without spawning processes.

#include <ostream>
#include <string>
#include <vector>

#include "mflab/multfun.hpp"

namespace mflab::cli {

/// Exit codes: 0 success, 1 computation error, 2 invalid arguments.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Short function names accepted by --fn, or inline JSON ('{...}'), or
/// '@path' to a JSON file. Prime sets are truncated at max_prime.
///   one | liouville | moebius | g1 | g2 | g3
///   chi:<m>[:chi8|psi8]      real primitive character
///   legendre:<p>:<+|->       f_p^{+-}
///   twist:<t>                n^{it}
///   lambda-every:<k>         (-1)^{Omega_P}, P = every k-th prime
///   omega-every:<k>          (-1)^{omega_P}
///   lambda-gap:<depth>:<start>
///   mrt[:<M>[:<depth>]]
///   mu2                      mu^2
FunctionSpec parse_function(const std::string& text, std::uint64_t max_prime);

}  // namespace mflab::cli
