#pragma once

#include <stdexcept>
#include <string>

namespace vtrack {

/// Raised for malformed inputs, contract violations and I/O failures.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace vtrack
