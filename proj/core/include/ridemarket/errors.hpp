#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ridemarket {

/// Invalid argument or precondition violation detected at a module boundary.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input file. Carries the offending line where known.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& file, int line, const std::string& what)
        : std::runtime_error(file + ":" + std::to_string(line) + ": " + what),
          line_(line) {}
    explicit ParseError(const std::string& what) : std::runtime_error(what), line_(0) {}
    int line() const { return line_; }

private:
    int line_;
};

/// A node pair with no connecting path. The network invariants make this
/// unreachable in practice; it is still reported rather than returning
/// an infinite travel time.
class ConnectivityError : public std::runtime_error {
public:
    explicit ConnectivityError(const std::string& what) : std::runtime_error(what) {}
    ConnectivityError(std::int64_t from, std::int64_t to)
        : std::runtime_error("no path from node " + std::to_string(from) + " to node " +
                             std::to_string(to)) {}
};

} // namespace ridemarket
