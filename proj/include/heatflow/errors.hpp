#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace heatflow {

// Configuration problems (bad spec, bad flags). CLI exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Numerical failures. CLI exit code 3.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PrecisionExhausted : NumericalError {
    using NumericalError::NumericalError;
};

struct RootFindingError : NumericalError {
    RootFindingError(const std::string& what, std::vector<int> idx)
        : NumericalError(what), unconverged(std::move(idx)) {}
    std::vector<int> unconverged;
};

// z sits on (or numerically at) the branch locus.
struct DegenerateFan : NumericalError {
    using NumericalError::NumericalError;
};

// Two saddle heights coincide at the level that decides relevance.
struct TieError : NumericalError {
    using NumericalError::NumericalError;
};

// Grid connectivity did not stabilise under refinement.
struct UndecidedError : NumericalError {
    using NumericalError::NumericalError;
};

struct SheetAmbiguity : NumericalError {
    using NumericalError::NumericalError;
};

struct BranchCutError : NumericalError {
    using NumericalError::NumericalError;
};

struct RegimeError : NumericalError {
    using NumericalError::NumericalError;
};

struct CollisionError : NumericalError {
    CollisionError(const std::string& what, int a, int b, double time)
        : NumericalError(what), i(a), j(b), t(time) {}
    int i, j;
    double t;
};

}  // namespace heatflow
