#ifndef SECTLABEL_ERRORS_HPP
#define SECTLABEL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace sectlabel {

// Error categories map 1:1 onto CLI exit codes (see tools/main.cpp).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed file contents (bad offsets, bad tensor container, version mismatch).
class FormatError : public std::runtime_error {
public:
    explicit FormatError(const std::string& msg) : std::runtime_error(msg) {}
};

// Unusable data: empty corpus, degenerate label sets, dimension mismatches.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace sectlabel

#endif
