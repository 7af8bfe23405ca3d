#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace loihi {

/// Base class for every error raised by the emulator library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter is outside its documented range.
class RangeError : public Error {
public:
    using Error::Error;
};

/// Integer state left the 64-bit signed range. Carries the unit and step when
/// raised from inside a simulation; both are -1 when unknown.
class OverflowError : public Error {
public:
    OverflowError(const std::string& what, std::string group = {}, std::int64_t unit = -1,
                  std::int64_t step = -1);

    const std::string& group() const noexcept { return group_; }
    std::int64_t unit() const noexcept { return unit_; }
    std::int64_t step() const noexcept { return step_; }

private:
    std::string group_;
    std::int64_t unit_;
    std::int64_t step_;
};

/// A network definition failed validation. Every violation is listed.
class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<std::string> problems);

    const std::vector<std::string>& problems() const noexcept { return problems_; }

private:
    std::vector<std::string> problems_;
};

}  // namespace loihi
