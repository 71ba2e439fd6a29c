#pragma once

// Minimal CSV reader/writer. Handles double-quoted fields with embedded
// commas and "" escapes; no multi-line fields.

#include <fstream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "balhon/errors.hpp"

namespace balhon::csv {

inline std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(field);
            field.clear();
        } else if (c != '\r') {
            field += c;
        }
    }
    out.push_back(field);
    return out;
}

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::unordered_map<std::string, std::size_t> col_index;

    std::size_t col(const std::string& name, const std::string& file) const {
        auto it = col_index.find(name);
        if (it == col_index.end())
            throw MissingColumn(file + ": missing column '" + name + "'");
        return it->second;
    }
};

inline Table read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    Table t;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        auto fields = split_line(line);
        if (first) {
            t.header = fields;
            for (std::size_t i = 0; i < fields.size(); ++i)
                t.col_index[fields[i]] = i;
            first = false;
        } else {
            t.rows.push_back(std::move(fields));
        }
    }
    return t;
}

inline std::string quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

}  // namespace balhon::csv
