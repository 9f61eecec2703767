#pragma once

#include <stdexcept>
#include <string>

namespace icdsel {

// Process exit codes: 2 usage, 3 data, 4 numeric.
enum class ErrorKind { Usage = 2, Data = 3, Numeric = 4 };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& name, const std::string& msg)
        : std::runtime_error(name + ": " + msg), kind_(kind), name_(name) {}
    ErrorKind kind() const { return kind_; }
    const std::string& name() const { return name_; }

private:
    ErrorKind kind_;
    std::string name_;
};

#define ICDSEL_ERROR(NAME, KIND)                                            \
    class NAME : public Error {                                             \
    public:                                                                 \
        explicit NAME(const std::string& msg)                               \
            : Error(ErrorKind::KIND, #NAME, msg) {}                         \
    }

ICDSEL_ERROR(MalformedRow, Data);
ICDSEL_ERROR(UnknownParent, Data);
ICDSEL_ERROR(DuplicateCode, Data);
ICDSEL_ERROR(CycleDetected, Data);
ICDSEL_ERROR(UnknownCode, Data);
ICDSEL_ERROR(InconsistentDates, Data);
ICDSEL_ERROR(DegenerateSplit, Data);
ICDSEL_ERROR(TooFewNodes, Data);
ICDSEL_ERROR(EmptyGraph, Data);
ICDSEL_ERROR(SingleClassTrain, Data);
ICDSEL_ERROR(DimensionMismatch, Data);
ICDSEL_ERROR(BatchTooSmall, Data);
ICDSEL_ERROR(IoError, Data);

ICDSEL_ERROR(NonFiniteLoss, Numeric);
ICDSEL_ERROR(ConvergenceFailure, Numeric);
ICDSEL_ERROR(CalibrationFailure, Numeric);
ICDSEL_ERROR(EmptyCluster, Numeric);

#undef ICDSEL_ERROR

}  // namespace icdsel
