#include "fpp/csv.hpp"

#include <cmath>
#include <sstream>

#include "fpp/errors.hpp"

namespace fpp {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";  // also folds -0
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(const std::filesystem::path& path) : path_(path) {
    out_.open(path, std::ios::binary | std::ios::trunc);
    if (!out_) throw IoError("cannot open " + path.string() + " for writing");
}

void CsvWriter::meta(std::string_view key, std::string_view value) {
    line_ += "# ";
    line_ += key;
    line_ += '=';
    line_ += value;
    line_ += '\n';
}

void CsvWriter::header(std::initializer_list<std::string_view> columns) {
    bool first = true;
    for (const auto c : columns) {
        append_sep(first);
        line_ += c;
    }
    line_ += '\n';
}

void CsvWriter::flush_if_large() {
    if (line_.size() < (1u << 16)) return;
    out_.write(line_.data(), static_cast<std::streamsize>(line_.size()));
    line_.clear();
    if (!out_) throw IoError("write failed: " + path_.string());
}

void CsvWriter::close() {
    out_.write(line_.data(), static_cast<std::streamsize>(line_.size()));
    line_.clear();
    out_.close();
    if (!out_) throw IoError("write failed: " + path_.string());
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    CsvTable t;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (!have_header) {
            t.header = std::move(cells);
            have_header = true;
        } else {
            t.rows.push_back(std::move(cells));
        }
    }
    return t;
}

}  // namespace fpp
