#pragma once

#include <stdexcept>
#include <string>

namespace nvcav {

/// Base of every error raised by the library. `code()` is a stable,
/// machine-readable identifier (e.g. "DegenerateSteadyState").
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

#define NVCAV_DEFINE_ERROR(Name)                                            \
    class Name : public Error {                                             \
    public:                                                                 \
        explicit Name(const std::string& message) : Error(#Name, message) {} \
    }

NVCAV_DEFINE_ERROR(InvalidParameters);
NVCAV_DEFINE_ERROR(InvalidArgument);
NVCAV_DEFINE_ERROR(DegenerateSteadyState);
NVCAV_DEFINE_ERROR(NumericalFailure);
NVCAV_DEFINE_ERROR(StepFailure);
NVCAV_DEFINE_ERROR(ZeroDenominator);
NVCAV_DEFINE_ERROR(DegenerateJacobian);
NVCAV_DEFINE_ERROR(ZeroSpectrum);
NVCAV_DEFINE_ERROR(OutOfRange);
NVCAV_DEFINE_ERROR(NotInGrid);

#undef NVCAV_DEFINE_ERROR

}  // namespace nvcav
