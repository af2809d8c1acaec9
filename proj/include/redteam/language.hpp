#pragma once

#include <cctype>
#include <optional>
#include <stdexcept>
#include <string>

namespace redteam {

/// Programming language a payload is rendered in.
enum class TargetLanguage { PythonSource, GoSource };

struct LanguageProfile {
    std::string key;             // machine key used by CLI flags and payload metadata
    std::string extension;       // includes the dot
    std::string comment_prefix;  // line comment, includes trailing space
    std::string concat_op;       // string concatenation, with surrounding spaces
};

inline const LanguageProfile& language_profile(TargetLanguage lang) {
    static const LanguageProfile python{"python", ".py", "# ", " + "};
    static const LanguageProfile go{"go", ".go", "// ", " + "};
    return lang == TargetLanguage::PythonSource ? python : go;
}

inline std::string language_key(TargetLanguage lang) { return language_profile(lang).key; }

inline TargetLanguage language_from_key(const std::string& key) {
    if (key == "python") return TargetLanguage::PythonSource;
    if (key == "go") return TargetLanguage::GoSource;
    throw std::invalid_argument("unknown language key: " + key + " (expected python|go)");
}

/// Escapes text for a double-quoted string literal. Python and Go share the
/// escape forms used here, so reconstruction is language independent.
inline std::string escape_literal(const std::string& text) {
    std::string out;
    out.reserve(text.size() + 8);
    for (char c : text) {
        switch (c) {
            case '\\': out += "\\\\"; break;
            case '"': out += "\\\""; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

/// Inverse of escape_literal. Unknown escapes are kept verbatim.
inline std::string unescape_literal(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (size_t i = 0; i < text.size(); ++i) {
        if (text[i] != '\\' || i + 1 >= text.size()) {
            out.push_back(text[i]);
            continue;
        }
        char next = text[++i];
        switch (next) {
            case '\\': out.push_back('\\'); break;
            case '"': out.push_back('"'); break;
            case 'n': out.push_back('\n'); break;
            case 't': out.push_back('\t'); break;
            case 'r': out.push_back('\r'); break;
            default:
                out.push_back('\\');
                out.push_back(next);
        }
    }
    return out;
}

inline bool is_identifier(const std::string& s) {
    if (s.empty()) return false;
    if (!(std::islower(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    for (char c : s) {
        if (!(std::islower(static_cast<unsigned char>(c)) ||
              std::isdigit(static_cast<unsigned char>(c)) || c == '_')) {
            return false;
        }
    }
    return true;
}

inline std::string render_comment(TargetLanguage lang, const std::string& text) {
    return language_profile(lang).comment_prefix + text;
}

/// Variable declaration holding a string literal. `escaped_value` must already
/// be escaped. Go uses short declarations because payloads place statements
/// inside func main().
inline std::string render_string_decl(TargetLanguage lang, const std::string& name,
                                      const std::string& escaped_value) {
    if (lang == TargetLanguage::PythonSource) {
        return name + " = \"" + escaped_value + "\"";
    }
    return name + " := \"" + escaped_value + "\"";
}

/// Declaration prefix up to and including the opening quote; completion
/// anchors are built from this.
inline std::string decl_open(TargetLanguage lang, const std::string& name) {
    if (lang == TargetLanguage::PythonSource) {
        return name + " = \"";
    }
    return name + " := \"";
}

inline std::string render_assign_expr(TargetLanguage lang, const std::string& name,
                                      const std::string& expr) {
    if (lang == TargetLanguage::PythonSource) {
        return name + " = " + expr;
    }
    return name + " := " + expr;
}

inline std::string render_print(TargetLanguage lang, const std::string& expr) {
    if (lang == TargetLanguage::PythonSource) {
        return "print(" + expr + ")";
    }
    return "fmt.Println(" + expr + ")";
}

// ---------------------------------------------------------------------------
// Structural sanity check
// ---------------------------------------------------------------------------

// Line-oriented scan: every double-quoted literal must close on its own line,
// honoring backslash escapes; text after the language's comment marker is
// ignored. Returns an error description, or nullopt when the content is
// structurally sound.
inline std::optional<std::string> check_source_structure(const std::string& content,
                                                         TargetLanguage lang) {
    const std::string& comment = lang == TargetLanguage::PythonSource ? "#" : "//";
    size_t lineno = 1;
    size_t pos = 0;
    while (pos <= content.size()) {
        size_t eol = content.find('\n', pos);
        std::string line = content.substr(pos, eol == std::string::npos ? eol : eol - pos);
        bool in_string = false;
        for (size_t i = 0; i < line.size(); ++i) {
            char c = line[i];
            if (in_string) {
                if (c == '\\') {
                    ++i;  // skip escaped char
                } else if (c == '"') {
                    in_string = false;
                }
            } else {
                if (line.compare(i, comment.size(), comment) == 0) {
                    break;
                }
                if (c == '"') {
                    in_string = true;
                }
            }
        }
        if (in_string) {
            return "line " + std::to_string(lineno) + ": unterminated string literal";
        }
        if (eol == std::string::npos) break;
        pos = eol + 1;
        ++lineno;
    }
    if (lang == TargetLanguage::GoSource && content.find("package ") == std::string::npos) {
        return "missing package clause";
    }
    return std::nullopt;
}

}  // namespace redteam
