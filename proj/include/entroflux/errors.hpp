#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace entroflux {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

#define ENTROFLUX_ERROR_TYPE(Name)       \
    class Name : public Error {          \
      public:                            \
        using Error::Error;              \
    };

ENTROFLUX_ERROR_TYPE(DomainError)    // state outside X (or X-bar) where required
ENTROFLUX_ERROR_TYPE(VacuumError)    // conserved density below rho_min in strict mode
ENTROFLUX_ERROR_TYPE(SingularError)  // grad A numerically singular
ENTROFLUX_ERROR_TYPE(MeasureError)   // atom weights not normalized
ENTROFLUX_ERROR_TYPE(GridError)      // non-nested grids / misaligned times
ENTROFLUX_ERROR_TYPE(ConfigError)    // inconsistent request (missing constraint, empty bank, ...)
ENTROFLUX_ERROR_TYPE(BlowupError)    // solver state exceeded ceiling
ENTROFLUX_ERROR_TYPE(ShockError)     // gradient monitor tripped / data not W^{1,inf}-resolved
ENTROFLUX_ERROR_TYPE(FitError)       // no admissible Gronwall rate below the cap
ENTROFLUX_ERROR_TYPE(CapError)       // inner maximizer hit the search cap
ENTROFLUX_ERROR_TYPE(MaskedAllError) // denominator mass vanishes everywhere
ENTROFLUX_ERROR_TYPE(ParseError)     // config file syntax

#undef ENTROFLUX_ERROR_TYPE

/// Collects every violated precondition found while validating a config.
class ValidationError : public Error {
  public:
    explicit ValidationError(std::vector<std::string> problems)
        : Error(join(problems)), problems_(std::move(problems)) {}

    const std::vector<std::string>& problems() const { return problems_; }

  private:
    static std::string join(const std::vector<std::string>& ps) {
        std::string out = "config validation failed:";
        for (const auto& p : ps) {
            out += "\n  - " + p;
        }
        return out;
    }

    std::vector<std::string> problems_;
};

} // namespace entroflux
