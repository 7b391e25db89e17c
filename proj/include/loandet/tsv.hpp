#pragma once

#include <iostream>
#include <string>
#include <vector>

namespace loandet {

// Warnings are collected when a sink is given, otherwise printed to stderr.
// Data never goes to stderr; warnings never go to stdout.
inline void emit_warning(std::vector<std::string>* sink, const std::string& msg) {
    if (sink) {
        sink->push_back(msg);
    } else {
        std::cerr << "warning: " << msg << "\n";
    }
}

namespace tsv {

std::vector<std::string> split_fields(const std::string& line);

// Reads a whole text file into lines. Accepts LF and CRLF, strips a
// leading UTF-8 BOM. Throws DataError if the file cannot be opened.
std::vector<std::string> read_lines(const std::string& path);

std::string join_fields(const std::vector<std::string>& fields);

}  // namespace tsv
}  // namespace loandet
