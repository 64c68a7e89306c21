#pragma once

#include <stdexcept>
#include <string>

namespace gsprune {

// Base class for all library errors.  Subclasses map 1:1 onto CLI exit codes
// so callers can classify failures without string matching.
class error : public std::runtime_error {
public:
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

// Unreadable/unwritable files, truncated payloads, malformed headers.
class io_error : public error {
public:
    explicit io_error(const std::string& msg) : error(msg) {}
};

// Structurally valid I/O but contents violate the expected layout
// (unknown property names, wrong encoding, bad magic).
class format_error : public io_error {
public:
    explicit format_error(const std::string& msg) : io_error(msg) {}
};

// Invalid or degenerate configuration: bad parameter ranges, empty
// selections, inputs too small for the requested operation.
class config_error : public error {
public:
    explicit config_error(const std::string& msg) : error(msg) {}
};

// A resource budget would be exceeded (e.g. the edge-count cap).
class capacity_error : public error {
public:
    explicit capacity_error(const std::string& msg) : error(msg) {}
};

// Exit codes used by the command-line tool.
enum exit_code : int {
    exit_ok = 0,
    exit_failure = 1,
    exit_io = 2,
    exit_config = 3,
    exit_capacity = 4,
};

inline int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const capacity_error*>(&e)) return exit_capacity;
    if (dynamic_cast<const config_error*>(&e)) return exit_config;
    if (dynamic_cast<const io_error*>(&e)) return exit_io;
    return exit_failure;
}

} // namespace gsprune
