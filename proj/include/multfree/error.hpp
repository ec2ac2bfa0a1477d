#pragma once

#include <stdexcept>
#include <string>

namespace multfree {

// Base of every domain error raised by the library. `name()` is the stable
// identifier surfaced by the command-line front end.
class Error : public std::runtime_error {
public:
    Error(std::string name, const std::string& what)
        : std::runtime_error(name + ": " + what), name_(std::move(name)) {}

    [[nodiscard]] const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

#define MULTFREE_DEFINE_ERROR(Name)                                          \
    class Name : public Error {                                              \
    public:                                                                  \
        explicit Name(const std::string& what) : Error(#Name, what) {}       \
    }

MULTFREE_DEFINE_ERROR(RatioNotGreaterThanOne);
MULTFREE_DEFINE_ERROR(LevelOutOfRange);
MULTFREE_DEFINE_ERROR(NotAChainStart);
MULTFREE_DEFINE_ERROR(TooLargeForOracle);
MULTFREE_DEFINE_ERROR(LambdaOutOfRange);
MULTFREE_DEFINE_ERROR(DomainError);

#undef MULTFREE_DEFINE_ERROR

}  // namespace multfree
