#pragma once

#include <iosfwd>
#include <string>

#include "entroflux/config.hpp"

namespace entroflux {

/// Exit-code contract: 0 = all verdicts pass, 1 = some verdict failed,
/// 2 = error (surfaced exception). dispatch() implements 0/1 and lets
/// errors propagate; dispatch_checked() maps them to 2.
int dispatch(const std::string& command, const RunConfig& cfg, std::ostream& log);
int dispatch_checked(const std::string& command, const RunConfig& cfg, std::ostream& log);

const std::vector<std::string>& known_commands();

} // namespace entroflux
