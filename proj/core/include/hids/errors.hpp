#ifndef HIDS_ERRORS_HPP
#define HIDS_ERRORS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hids {

// Exit-code taxonomy used by the CLI: 1 usage/config, 2 data, 3 artifact mismatch.
struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

struct DataError : std::runtime_error {
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// A single input record that cannot be parsed or encoded. Carries the
// 1-based line number so the caller can report it or skip-and-count.
struct MalformedRecord : DataError {
    MalformedRecord(std::uint64_t line, const std::string& reason)
        : DataError("malformed-record at line " + std::to_string(line) + ": " + reason),
          line_no(line),
          reason(reason) {}
    std::uint64_t line_no;
    std::string reason;
};

// Artifacts (schema / detector set / SOM model) fitted under different
// schemas must never be mixed.
struct ArtifactMismatch : std::runtime_error {
    explicit ArtifactMismatch(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hids

#endif
