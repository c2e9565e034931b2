#pragma once

#include <stdexcept>
#include <string>

namespace nads {

/// Base of every error raised by the library. The CLI maps all of them to exit status 1.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define NADS_DEFINE_ERROR(Name)                                                   \
    class Name : public Error {                                                   \
    public:                                                                       \
        explicit Name(const std::string& what) : Error(#Name, what) {}            \
    }

NADS_DEFINE_ERROR(DomainError);
NADS_DEFINE_ERROR(SmoothnessError);
NADS_DEFINE_ERROR(ConfigError);
NADS_DEFINE_ERROR(ParamRangeError);
NADS_DEFINE_ERROR(SelfMapError);
NADS_DEFINE_ERROR(HypothesisError);
NADS_DEFINE_ERROR(PreconditionError);
NADS_DEFINE_ERROR(NegativeInputError);
NADS_DEFINE_ERROR(EmptyInputError);
NADS_DEFINE_ERROR(RangeError);
NADS_DEFINE_ERROR(ParseError);

#undef NADS_DEFINE_ERROR

}  // namespace nads
