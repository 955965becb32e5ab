#ifndef WIDEGAPS_ERROR_HPP
#define WIDEGAPS_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace widegaps {

enum class Errc {
    DuplicatePoint,
    AsymmetricInput,
    NegativeDistance,
    TooSmall,
    InvalidClustering,
    KTooSmall,
    NegativeBeta,
    KOutOfRange,
    InvalidSpec,
    SizeMismatch,
    ConfigInvalid,
    ResidualUndefined,
    RangePlantFailed,
    TooLarge,
    InvalidArgs,
    ParseError,
    InvariantBreach,
};

std::string_view errc_name(Errc code) noexcept;

/// Every library failure is reported through this exception; `code()` is
/// stable and is what the CLI maps to exit codes.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace widegaps

#endif
