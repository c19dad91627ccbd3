#include "table_io.hpp"

#include "selprior/errors.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>

namespace selprior::cli {

std::string format_value(double x) {
    char buf[64];
    const auto res =
        std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 10);
    return std::string(buf, res.ptr);
}

namespace {

void rename_into_place(const std::string& tmp, const std::string& path) {
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw Error("failed to move temporary output to '" + path + "'");
    }
}

} // namespace

void write_csv_atomic(const std::string& path, const ResultTable& table) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw Error("cannot write '" + tmp + "'");
        for (std::size_t i = 0; i < table.columns.size(); ++i) {
            out << (i ? "," : "") << table.columns[i];
        }
        out << "\n";
        for (const auto& row : table.rows) {
            if (row.size() != table.columns.size()) {
                throw Error("result row width does not match the header");
            }
            for (std::size_t i = 0; i < row.size(); ++i) {
                out << (i ? "," : "") << row[i];
            }
            out << "\n";
        }
        if (!out) throw Error("write failure on '" + tmp + "'");
    }
    rename_into_place(tmp, path);
}

void write_json_atomic(const std::string& path, const nlohmann::json& doc) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw Error("cannot write '" + tmp + "'");
        out << doc.dump(2) << "\n";
        if (!out) throw Error("write failure on '" + tmp + "'");
    }
    rename_into_place(tmp, path);
}

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

} // namespace selprior::cli
