#pragma once
// Minimal CSV support for the pilot/SME file formats: UTF-8, comma
// separated, double-quote escaping, CR/LF tolerant. Leading lines
// starting with '#' are surfaced as comment lines, not rows.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "formav/errors.hpp"

namespace formav::csv {

struct Document {
    std::vector<std::string> comments;            // lines starting with '#', in order
    std::vector<std::vector<std::string>> rows;   // includes the header row
};

inline std::vector<std::string> parse_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (quoted) throw ParseError("unterminated quote in CSV line: " + line);
    fields.push_back(cur);
    return fields;
}

inline Document parse(std::istream& in) {
    Document doc;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.front() == '#') {
            doc.comments.push_back(line);
            continue;
        }
        doc.rows.push_back(parse_line(line));
    }
    return doc;
}

inline Document read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open file: " + path);
    return parse(in);
}

inline std::string escape(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char ch : field) {
        if (ch == '"') out += "\"\"";
        else out += ch;
    }
    out += '"';
    return out;
}

inline std::string format_row(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ',';
        out += escape(fields[i]);
    }
    out += '\n';
    return out;
}

}  // namespace formav::csv
