#pragma once

#include <stdexcept>
#include <string>

namespace robnbc {

// Input text that failed to parse; carries a 1-based line number when known.
class parse_error : public std::runtime_error {
public:
    parse_error(const std::string& what, long line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}
    long line() const { return line_; }

private:
    long line_;
};

class io_error : public std::runtime_error {
public:
    io_error(const std::string& what, const std::string& path)
        : std::runtime_error(what + ": " + path) {}
};

} // namespace robnbc
