#ifndef WPS_COMMON_HPP
#define WPS_COMMON_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace wps {

using ItemId = std::uint32_t;
using NodeId = std::uint32_t;
using TxId = std::uint64_t;

inline constexpr ItemId kNoItem = 0xFFFFFFFFu;
inline constexpr NodeId kNoNode = 0xFFFFFFFFu;
inline constexpr std::uint32_t kNoRank = 0xFFFFFFFFu;

/// Item ids address dense per-item tables, so the id space is capped rather
/// than sparse. 2^24 ids keeps those tables within tens of megabytes.
inline constexpr ItemId kMaxItemId = (1u << 24) - 1;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid configuration or parameter range.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Filesystem-level failure; message carries the offending path.
class IoError : public Error {
public:
    using Error::Error;
};

/// Bad magic, version mismatch or checksum failure in an index file.
class FormatError : public Error {
public:
    using Error::Error;
};

/// Recoverable per-line parse failure. Carries source path and line number
/// so callers can skip-and-count or abort with context.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::string path, std::uint64_t line)
        : Error(path.empty() ? what + " (line " + std::to_string(line) + ")"
                             : path + ":" + std::to_string(line) + ": " + what),
          path_(std::move(path)),
          line_(line) {}

    const std::string& path() const { return path_; }
    std::uint64_t line() const { return line_; }

private:
    std::string path_;
    std::uint64_t line_;
};

/// Item-key ordering: pure decimal tokens compare by numeric value, anything
/// else byte-wise. Keeps single-letter page names and their integer-encoded
/// flat-file counterparts in the same relative order.
bool natural_less(std::string_view a, std::string_view b);

} // namespace wps

#endif
