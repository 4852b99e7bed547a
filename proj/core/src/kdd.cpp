#include "hids/kdd.hpp"

#include <zlib.h>

#include <cstdio>
#include <cstring>

#include "hids/errors.hpp"

namespace hids {

RawRecord parse_kdd_record(std::string_view line, std::uint64_t line_no) {
    // Tolerate a trailing CR from CRLF files.
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    RawRecord rec;
    rec.fields.reserve(kKddFieldCount);
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        std::string_view field = (comma == std::string_view::npos)
                                     ? line.substr(start)
                                     : line.substr(start, comma - start);
        rec.fields.emplace_back(field);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }

    const auto n = rec.fields.size();
    if (n == kKddFieldCount + 1) {
        std::string label = std::move(rec.fields.back());
        rec.fields.pop_back();
        if (!label.empty() && label.back() == '.') label.pop_back();
        if (label.empty())
            throw MalformedRecord(line_no, "empty label field");
        rec.label = std::move(label);
    } else if (n != kKddFieldCount) {
        throw MalformedRecord(line_no, "expected 41 or 42 fields, got " + std::to_string(n));
    }
    for (const auto& f : rec.fields) {
        if (f.empty()) throw MalformedRecord(line_no, "empty feature field");
    }
    return rec;
}

namespace {

bool has_gz_suffix(const std::string& path) {
    return path.size() > 3 && path.compare(path.size() - 3, 3, ".gz") == 0;
}

}  // namespace

struct LineReader::Impl {
    std::FILE* file = nullptr;
    gzFile gz = nullptr;
    std::string buffer;

    ~Impl() {
        if (file) std::fclose(file);
        if (gz) gzclose(gz);
    }

    bool read_line(std::string& out) {
        out.clear();
        char chunk[4096];
        if (gz) {
            while (gzgets(gz, chunk, sizeof chunk)) {
                out.append(chunk);
                if (!out.empty() && out.back() == '\n') {
                    out.pop_back();
                    return true;
                }
            }
            return !out.empty();
        }
        while (std::fgets(chunk, sizeof chunk, file)) {
            out.append(chunk);
            if (!out.empty() && out.back() == '\n') {
                out.pop_back();
                return true;
            }
        }
        return !out.empty();
    }
};

LineReader::LineReader(const std::string& path) : impl_(std::make_unique<Impl>()) {
    if (has_gz_suffix(path)) {
        impl_->gz = gzopen(path.c_str(), "rb");
        if (!impl_->gz) throw DataError("cannot open " + path);
    } else {
        impl_->file = std::fopen(path.c_str(), "rb");
        if (!impl_->file) throw DataError("cannot open " + path);
    }
}

LineReader::~LineReader() = default;
LineReader::LineReader(LineReader&&) noexcept = default;
LineReader& LineReader::operator=(LineReader&&) noexcept = default;

bool LineReader::next(std::string& line) {
    while (impl_->read_line(line)) {
        ++line_no_;
        if (!line.empty() && line != "\r") return true;
    }
    return false;
}

std::uint64_t for_each_kdd_record(
    const std::string& path, bool skip_malformed,
    const std::function<void(const RawRecord&, std::uint64_t)>& sink) {
    LineReader reader(path);
    std::string line;
    std::uint64_t skipped = 0;
    while (reader.next(line)) {
        try {
            RawRecord rec = parse_kdd_record(line, reader.line_no());
            sink(rec, reader.line_no());
        } catch (const MalformedRecord&) {
            if (!skip_malformed) throw;
            ++skipped;
        }
    }
    return skipped;
}

}  // namespace hids
