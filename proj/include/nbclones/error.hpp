#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nbc {

/// Input that violates a documented contract (bad manifest line, empty corpus, ...).
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& message, std::string file = {}, std::size_t line = 0)
        : std::runtime_error(message), file_(std::move(file)), line_(line) {}

    const std::string& file() const noexcept { return file_; }
    /// 1-based; 0 when the error is not tied to a line.
    std::size_t line() const noexcept { return line_; }

private:
    std::string file_;
    std::size_t line_;
};

class IoError : public std::runtime_error {
public:
    IoError(const std::string& message, std::string path)
        : std::runtime_error(message), path_(std::move(path)) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

}  // namespace nbc
