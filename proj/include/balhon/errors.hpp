#pragma once

#include <stdexcept>
#include <string>

namespace balhon {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct MissingColumn : Error {
    explicit MissingColumn(const std::string& msg) : Error(msg) {}
};

struct UnknownPort : Error {
    explicit UnknownPort(const std::string& msg) : Error(msg) {}
};

struct InvariantViolation : Error {
    explicit InvariantViolation(const std::string& msg) : Error(msg) {}
};

struct EmptyDataset : Error {
    explicit EmptyDataset(const std::string& msg) : Error(msg) {}
};

struct ZeroTreatments : Error {
    explicit ZeroTreatments(const std::string& msg) : Error(msg) {}
};

struct UnknownVesselType : Error {
    explicit UnknownVesselType(const std::string& msg) : Error(msg) {}
};

struct DegenerateInput : Error {
    explicit DegenerateInput(const std::string& msg) : Error(msg) {}
};

struct DatasetMismatch : Error {
    explicit DatasetMismatch(const std::string& msg) : Error(msg) {}
};

struct DanglingRule : Error {
    explicit DanglingRule(const std::string& msg) : Error(msg) {}
};

struct UndefinedReduction : Error {
    explicit UndefinedReduction(const std::string& msg) : Error(msg) {}
};

}  // namespace balhon
