#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace tvmerge {

// Base of every domain error. `code()` is the stable machine-readable name
// that the CLI prints on stderr before exiting with status 1.
class error : public std::runtime_error {
public:
    error(std::string code, const std::string & msg)
        : std::runtime_error(code + ": " + msg), code_(std::move(code)) {}

    const std::string & code() const noexcept { return code_; }

private:
    std::string code_;
};

struct shape_mismatch : error {
    explicit shape_mismatch(const std::string & m) : error("ShapeMismatch", m) {}
};

struct non_finite : error {
    explicit non_finite(const std::string & m) : error("NonFinite", m) {}
};

struct invalid_fraction : error {
    explicit invalid_fraction(const std::string & m) : error("InvalidFraction", m) {}
};

struct coefficient_arity_mismatch : error {
    explicit coefficient_arity_mismatch(const std::string & m) : error("CoefficientArityMismatch", m) {}
};

struct invalid_distribution : error {
    explicit invalid_distribution(const std::string & m) : error("InvalidDistribution", m) {}
};

struct length_mismatch : error {
    explicit length_mismatch(const std::string & m) : error("LengthMismatch", m) {}
};

struct empty_input : error {
    explicit empty_input(const std::string & m) : error("Empty", m) {}
};

struct empty_pool : error {
    explicit empty_pool(const std::string & m) : error("EmptyPool", m) {}
};

struct invalid_argument : error {
    explicit invalid_argument(const std::string & m) : error("InvalidArgument", m) {}
};

struct io_error : error {
    explicit io_error(const std::string & m) : error("IoError", m) {}
};

struct parse_error : error {
    parse_error(const std::string & m, std::size_t line)
        : error("ParseError", m + " (line " + std::to_string(line) + ")"), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

struct unknown_key : error {
    explicit unknown_key(const std::string & m) : error("UnknownKey", m) {}
};

struct diverged_at_step : error {
    explicit diverged_at_step(long step)
        : error("DivergedAtStep", "objective became non-finite at step " + std::to_string(step)),
          step_(step) {}
    long step() const noexcept { return step_; }

private:
    long step_;
};

// Checkpoint file errors carry the byte offset where the problem was found.
class file_format_error : public error {
public:
    file_format_error(std::string code, const std::string & msg, std::uint64_t offset)
        : error(std::move(code), msg + " (offset " + std::to_string(offset) + ")"), offset_(offset) {}
    std::uint64_t offset() const noexcept { return offset_; }

private:
    std::uint64_t offset_;
};

struct bad_magic : file_format_error {
    bad_magic(const std::string & m, std::uint64_t off) : file_format_error("BadMagic", m, off) {}
};

struct unsupported_version : file_format_error {
    unsupported_version(const std::string & m, std::uint64_t off)
        : file_format_error("UnsupportedVersion", m, off) {}
};

struct truncated_file : file_format_error {
    truncated_file(const std::string & m, std::uint64_t off) : file_format_error("TruncatedFile", m, off) {}
};

struct checksum_mismatch : file_format_error {
    checksum_mismatch(const std::string & m, std::uint64_t off)
        : file_format_error("ChecksumMismatch", m, off) {}
};

} // namespace tvmerge
