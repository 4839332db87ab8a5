#pragma once

#include <stdexcept>
#include <string>

namespace scalolab {

// Coarse category used by the CLI to pick an exit code.
enum class ErrorKind { config, numeric, precondition };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

#define SCALOLAB_ERROR(Name, Kind, Prefix)                                         \
    class Name : public Error {                                                    \
    public:                                                                        \
        explicit Name(const std::string& what) : Error(Kind, Prefix + what) {}     \
    };

SCALOLAB_ERROR(DomainError, ErrorKind::numeric, std::string("domain error: "))
SCALOLAB_ERROR(OrderingError, ErrorKind::numeric, std::string("ordering error: "))
SCALOLAB_ERROR(LongMemoryError, ErrorKind::numeric, std::string("long-memory violation: "))
SCALOLAB_ERROR(BoundaryError, ErrorKind::numeric, std::string("boundary error: "))
SCALOLAB_ERROR(SingularityError, ErrorKind::numeric, std::string("singularity: "))
SCALOLAB_ERROR(NonIntegrableError, ErrorKind::numeric, std::string("non-integrable: "))
SCALOLAB_ERROR(ResolutionError, ErrorKind::numeric, std::string("resolution error: "))
SCALOLAB_ERROR(ScaleError, ErrorKind::numeric, std::string("scale too coarse: "))
SCALOLAB_ERROR(ValidationError, ErrorKind::numeric, std::string("filter validation: "))
SCALOLAB_ERROR(DegenerateScalogramError, ErrorKind::numeric, std::string("degenerate scalogram: "))
SCALOLAB_ERROR(QuadratureError, ErrorKind::numeric, std::string("nonconvergent quadrature: "))
SCALOLAB_ERROR(HypothesisError, ErrorKind::numeric, std::string("invalid hypothesis: "))
SCALOLAB_ERROR(QuantileEngineError, ErrorKind::numeric, std::string("quantile engine: "))
SCALOLAB_ERROR(ConfigError, ErrorKind::config, std::string("config error: "))
SCALOLAB_ERROR(ParseError, ErrorKind::config, std::string("parse error: "))
SCALOLAB_ERROR(PreconditionError, ErrorKind::precondition, std::string("precondition flag: "))

#undef SCALOLAB_ERROR

}  // namespace scalolab
