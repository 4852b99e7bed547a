#ifndef HIDS_KDD_HPP
#define HIDS_KDD_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hids {

inline constexpr int kKddFieldCount = 41;

// One KDD-format connection record: 41 textual feature fields plus an
// optional label (42nd field, trailing period tolerated).
struct RawRecord {
    std::vector<std::string> fields;   // exactly 41
    std::optional<std::string> label;  // normalized: no trailing '.'
};

// Parses one CSV line. Throws MalformedRecord on a wrong field count.
RawRecord parse_kdd_record(std::string_view line, std::uint64_t line_no = 0);

// Line reader over a plain or gzip file (gzip chosen by ".gz" extension).
// Skips empty lines. Throws DataError when the file cannot be opened.
class LineReader {
public:
    explicit LineReader(const std::string& path);
    ~LineReader();
    LineReader(LineReader&&) noexcept;
    LineReader& operator=(LineReader&&) noexcept;

    // Returns false at end of input. line_no() refers to the line returned.
    bool next(std::string& line);
    std::uint64_t line_no() const { return line_no_; }

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    std::uint64_t line_no_ = 0;
};

// Reads, parses and hands every record of a KDD file to `sink`.
// skip_malformed: count bad lines and continue instead of aborting.
// Returns the number of skipped lines.
std::uint64_t for_each_kdd_record(
    const std::string& path, bool skip_malformed,
    const std::function<void(const RawRecord&, std::uint64_t line_no)>& sink);

}  // namespace hids

#endif
