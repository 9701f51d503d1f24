#pragma once

#include <stdexcept>
#include <string>

namespace lc {

enum class ErrorCode {
    DimensionMismatch,
    IndexOutOfRange,
    NotALatticePoint,
    NotABasis,
    ZeroVector,
    NonPositiveWeight,
    CollinearDuplicates,
    AsymmetricWeights,
    NotGBasisWedge,
    NoWedgeFound,
    NotConvex,
    InvalidImage,
    Parse,
    NegativeRadius,
    Overflow,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace lc
