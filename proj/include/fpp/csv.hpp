#pragma once

// CSV output: `#`-prefixed metadata lines, one header line, `\n` endings,
// floats as shortest round-trip decimals.

#include <charconv>
#include <concepts>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace fpp {

std::string format_double(double v);

class CsvWriter {
public:
    explicit CsvWriter(const std::filesystem::path& path);

    void meta(std::string_view key, std::string_view value);
    void header(std::initializer_list<std::string_view> columns);

    template <class... T>
    void row(const T&... cells) {
        bool first = true;
        ((append_sep(first), append(cells)), ...);
        line_ += '\n';
        flush_if_large();
    }

    // Flushes and closes; throws IoError if anything failed.
    void close();
    const std::filesystem::path& path() const { return path_; }

private:
    void append_sep(bool& first) {
        if (!first) line_ += ',';
        first = false;
    }
    void append(double v) { line_ += format_double(v); }
    void append(std::string_view s) { line_ += s; }
    void append(const std::string& s) { line_ += s; }
    void append(const char* s) { line_ += s; }
    template <std::integral I>
    void append(I v) {
        char buf[32];
        const auto res = std::to_chars(buf, buf + sizeof buf, v);
        line_.append(buf, res.ptr);
    }
    void flush_if_large();

    std::filesystem::path path_;
    std::ofstream out_;
    std::string line_;
};

// Minimal reader for files written by CsvWriter: skips metadata, returns the
// header and the rows split on commas.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv(const std::filesystem::path& path);

}  // namespace fpp
