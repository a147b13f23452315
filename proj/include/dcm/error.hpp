#pragma once

#include <stdexcept>
#include <string>

namespace dcm {

/// Input violates a precondition of the invoked operation.
class validation_error : public std::invalid_argument {
public:
    explicit validation_error(const std::string& what) : std::invalid_argument(what) {}
};

/// Exact computation refused because the instance exceeds the enumeration limit.
class scale_error : public std::runtime_error {
public:
    explicit scale_error(const std::string& what) : std::runtime_error(what) {}
};

class io_error : public std::runtime_error {
public:
    explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dcm
