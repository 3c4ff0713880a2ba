#pragma once

#include <stdexcept>
#include <string>

namespace soppp {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// dag_core
struct CycleDetected : Error {
    using Error::Error;
};
struct UnreachableEdge : Error {
    using Error::Error;
};
struct BadEndpoints : Error {
    using Error::Error;
};
struct TooManyPaths : Error {
    using Error::Error;
};
struct NumericalDegeneracy : Error {
    using Error::Error;
};

// exp3oe
struct InconsistentFeedback : Error {
    using Error::Error;
};
struct LossOutOfRange : Error {
    using Error::Error;
};

// games
struct BadAllocation : Error {
    using Error::Error;
};
struct IncoherentSearch : Error {
    using Error::Error;
};

// harness
struct ParseError : Error {
    using Error::Error;
};
struct MissingKey : Error {
    using Error::Error;
};
struct IoError : Error {
    using Error::Error;
};

} // namespace soppp
