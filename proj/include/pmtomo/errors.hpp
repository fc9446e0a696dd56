#pragma once

#include <stdexcept>
#include <string>

namespace pmtomo {

/// Base class of every failure raised by the library. The CLI maps these to
/// exit code 1; ConfigError maps to exit code 2.
class Error : public std::runtime_error {
  public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}

    /// Stable machine-readable category, used in structured error output.
    const std::string& kind() const noexcept { return kind_; }

  private:
    std::string kind_;
};

#define PMTOMO_DEFINE_ERROR(Name, tag)                                         \
    class Name : public Error {                                                \
      public:                                                                  \
        explicit Name(const std::string& what) : Error(tag, what) {}           \
    }

PMTOMO_DEFINE_ERROR(DomainError, "domain");
PMTOMO_DEFINE_ERROR(ResolutionError, "resolution");
PMTOMO_DEFINE_ERROR(TruncationError, "truncation");
PMTOMO_DEFINE_ERROR(GridError, "grid");
PMTOMO_DEFINE_ERROR(UnsupportedError, "unsupported");
PMTOMO_DEFINE_ERROR(InputError, "input");
PMTOMO_DEFINE_ERROR(TableError, "table");
PMTOMO_DEFINE_ERROR(InvalidMomentsError, "invalid_moments");
PMTOMO_DEFINE_ERROR(IllPosedError, "ill_posed");
PMTOMO_DEFINE_ERROR(UnreliableDerivativeError, "unreliable_derivative");
PMTOMO_DEFINE_ERROR(PreconditionError, "precondition");
PMTOMO_DEFINE_ERROR(ConstructionError, "construction");
PMTOMO_DEFINE_ERROR(ConfigError, "config");

#undef PMTOMO_DEFINE_ERROR

} // namespace pmtomo
