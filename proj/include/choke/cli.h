/*
 * Command line front end
 *
 * Exit codes: 0 success, 1 domain error (decapsulation failure, insecure
 * code, ...), 2 usage error (bad arguments, missing files, malformed config).
 */

#ifndef CHOKE_CLI_H_
#define CHOKE_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace choke {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

/// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace choke

#endif
