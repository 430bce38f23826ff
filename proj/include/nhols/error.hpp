#pragma once

#include <stdexcept>
#include <string>

namespace nhols {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define NHOLS_DEFINE_ERROR(Name)                                               \
    struct Name : Error {                                                      \
        using Error::Error;                                                    \
    }

NHOLS_DEFINE_ERROR(InvalidWeight);    // nonpositive or inconsistent weight
NHOLS_DEFINE_ERROR(InvalidNode);      // node id out of range, self-loop input
NHOLS_DEFINE_ERROR(IsolatedNode);     // zero degree / zero hyper-degree without fallback
NHOLS_DEFINE_ERROR(DegenerateTriple); // repeated index within a hyperedge
NHOLS_DEFINE_ERROR(ShapeError);       // dimension mismatch
NHOLS_DEFINE_ERROR(DomainError);      // value outside a function's domain
NHOLS_DEFINE_ERROR(InvalidParam);     // parameter constraint violated
NHOLS_DEFINE_ERROR(ParseError);       // malformed input file
NHOLS_DEFINE_ERROR(ConfigError);      // bad manifest / missing file
NHOLS_DEFINE_ERROR(InvalidEval);      // degenerate evaluation (empty unlabeled set, ...)
NHOLS_DEFINE_ERROR(InvalidLabels);    // empty class or malformed label set

#undef NHOLS_DEFINE_ERROR

}  // namespace nhols
