#pragma once

#include <stdexcept>
#include <string>

namespace mfsir {

// Error taxonomy mirrors the CLI exit codes: usage_error -> 1,
// data_error -> 2, numeric_error -> 3.
class error : public std::runtime_error {
public:
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

class usage_error : public error {
public:
    explicit usage_error(const std::string& msg) : error(msg) {}
};

class data_error : public error {
public:
    explicit data_error(const std::string& msg) : error(msg) {}
};

class numeric_error : public error {
public:
    explicit numeric_error(const std::string& msg) : error(msg) {}
};

}  // namespace mfsir
