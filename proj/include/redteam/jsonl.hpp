#pragma once

#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace redteam {

using json = nlohmann::json;

/// Thrown for malformed inputs; message carries file/line context where known.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open file: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write file: " + path);
    }
    out << content;
    if (!out) {
        throw std::runtime_error("short write: " + path);
    }
}

// Calls fn(line_number, parsed_object) for every non-empty line. Line numbers
// are 1-based. A malformed line aborts with a ParseError naming the line,
// unless tolerate_trailing_garbage is set and the bad line is the final one
// (crash-recovery mode for append-only logs).
inline void for_each_jsonl(const std::string& path,
                           const std::function<void(size_t, const json&)>& fn,
                           bool tolerate_trailing_garbage = false) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open file: " + path);
    }
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.find_first_not_of(" \t") == std::string::npos) {
            continue;
        }
        json obj = json::parse(line, nullptr, false);
        if (obj.is_discarded() || !obj.is_object()) {
            if (tolerate_trailing_garbage && in.peek() == std::ifstream::traits_type::eof()) {
                return;  // truncated final line from an interrupted writer
            }
            throw ParseError(path + ":" + std::to_string(lineno) + ": malformed JSON line");
        }
        fn(lineno, obj);
    }
}

inline bool file_exists(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return in.good();
}

}  // namespace redteam
