#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "redteam/corpus.hpp"
#include "redteam/language.hpp"
#include "redteam/payload.hpp"
#include "redteam/payload_gen.hpp"
#include "redteam/text.hpp"

namespace redteam {

// A campaign config file is flat `key = value` lines: quoted strings,
// integers, true/false, and lists of quoted strings. `#` starts a comment.
using ConfigValue = std::variant<std::string, std::int64_t, bool, std::vector<std::string>>;

namespace detail {

inline bool config_key_char(char c) { return ascii_alnum(c) || c == '_'; }

struct ConfigCursor {
    const std::string& line;
    size_t pos = 0;
    const std::string& context;
    int line_no;

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError(context + ":" + std::to_string(line_no) + ": " + what);
    }
    bool done() {
        skip_ws();
        return pos >= line.size() || line[pos] == '#';
    }
    void skip_ws() {
        while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
    }
    char peek() const { return pos < line.size() ? line[pos] : '\0'; }

    std::string quoted_string() {
        if (peek() != '"') fail("expected opening quote");
        ++pos;
        std::string escaped;
        while (pos < line.size()) {
            char c = line[pos];
            if (c == '\\') {
                if (pos + 1 >= line.size()) fail("dangling backslash in string");
                escaped += c;
                escaped += line[pos + 1];
                pos += 2;
                continue;
            }
            if (c == '"') {
                ++pos;
                return unescape_literal(escaped);
            }
            escaped += c;
            ++pos;
        }
        fail("unterminated string");
    }

    ConfigValue value() {
        skip_ws();
        char c = peek();
        if (c == '"') return quoted_string();
        if (c == '[') {
            ++pos;
            std::vector<std::string> items;
            skip_ws();
            if (peek() == ']') {
                ++pos;
                return items;
            }
            while (true) {
                skip_ws();
                items.push_back(quoted_string());
                skip_ws();
                if (peek() == ',') {
                    ++pos;
                    continue;
                }
                if (peek() == ']') {
                    ++pos;
                    return items;
                }
                fail("expected ',' or ']' in list");
            }
        }
        size_t start = pos;
        while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t' && line[pos] != '#')
            ++pos;
        std::string token = line.substr(start, pos - start);
        if (token == "true") return true;
        if (token == "false") return false;
        if (!token.empty() &&
            token.find_first_not_of("0123456789", token[0] == '-' ? 1 : 0) == std::string::npos &&
            token != "-") {
            try {
                return static_cast<std::int64_t>(std::stoll(token));
            } catch (const std::exception&) {
                fail("integer out of range: " + token);
            }
        }
        fail("unrecognized value: \"" + token + "\" (expected string, integer, bool, or list)");
    }
};

}  // namespace detail

inline std::map<std::string, ConfigValue> parse_config(const std::string& text,
                                                       const std::string& context) {
    std::map<std::string, ConfigValue> out;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        detail::ConfigCursor cur{line, 0, context, line_no};
        if (cur.done()) continue;
        if (cur.peek() == '[')
            cur.fail("sections are not supported; use flat keys");
        size_t key_start = cur.pos;
        while (cur.pos < line.size() && detail::config_key_char(line[cur.pos])) ++cur.pos;
        std::string key = line.substr(key_start, cur.pos - key_start);
        if (key.empty()) cur.fail("expected a key");
        cur.skip_ws();
        if (cur.peek() != '=') cur.fail("expected '=' after key \"" + key + "\"");
        ++cur.pos;
        ConfigValue value = cur.value();
        if (!cur.done()) cur.fail("trailing characters after value for \"" + key + "\"");
        if (out.count(key)) cur.fail("duplicate key \"" + key + "\"");
        out.emplace(std::move(key), std::move(value));
    }
    return out;
}

inline std::map<std::string, ConfigValue> parse_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path);
}

struct CampaignConfig {
    std::string corpus_path;
    std::vector<AttackKind> attack_kinds;
    TargetLanguage language = TargetLanguage::PythonSource;
    int trials_per_query = 5;
    std::string backend_id;
    int max_parallel = 1;
    std::string output_dir;
    GeneratorConfig generator;
    int retry_max = 3;
    std::int64_t retry_backoff_ms = 500;
    std::int64_t politeness_delay_ms = 0;
    bool level1_guiding_words = true;
    PrivacyField privacy_field = PrivacyField::Email;
};

namespace detail {

template <typename T>
inline T config_get(const std::map<std::string, ConfigValue>& values, const std::string& key,
                    const std::string& context) {
    auto it = values.find(key);
    if (it == values.end()) throw ParseError(context + ": missing required key \"" + key + "\"");
    const T* v = std::get_if<T>(&it->second);
    if (!v) throw ParseError(context + ": wrong type for key \"" + key + "\"");
    return *v;
}

template <typename T>
inline T config_get_or(const std::map<std::string, ConfigValue>& values, const std::string& key,
                       T fallback, const std::string& context) {
    auto it = values.find(key);
    if (it == values.end()) return fallback;
    const T* v = std::get_if<T>(&it->second);
    if (!v) throw ParseError(context + ": wrong type for key \"" + key + "\"");
    return *v;
}

inline int config_positive_int(const std::map<std::string, ConfigValue>& values,
                               const std::string& key, int fallback,
                               const std::string& context) {
    std::int64_t v = config_get_or<std::int64_t>(values, key, fallback, context);
    if (v < 1) throw ParseError(context + ": \"" + key + "\" must be >= 1");
    return static_cast<int>(v);
}

}  // namespace detail

// The documented key set; see docs/campaign_config.md.
inline CampaignConfig campaign_config_from_values(
    const std::map<std::string, ConfigValue>& values, const std::string& context) {
    static const std::set<std::string> known = {
        "corpus",          "attacks",          "language",        "trials_per_query",
        "backend",         "max_parallel",     "output_dir",      "retry_max",
        "retry_backoff_ms", "politeness_delay_ms", "level1_guiding_words", "privacy_field",
        "static_prompt",   "guiding_words",    "answer_var",      "sensitive_lexicon",
        "carrier_sentence", "split_count_max",
    };
    for (const auto& [key, value] : values) {
        if (!known.count(key)) throw ParseError(context + ": unknown key \"" + key + "\"");
    }

    CampaignConfig cfg;
    cfg.corpus_path = detail::config_get<std::string>(values, "corpus", context);
    cfg.output_dir = detail::config_get<std::string>(values, "output_dir", context);

    auto kind_keys = detail::config_get<std::vector<std::string>>(values, "attacks", context);
    if (kind_keys.empty()) throw ParseError(context + ": \"attacks\" must not be empty");
    std::set<std::string> seen;
    for (const std::string& key : kind_keys) {
        if (!seen.insert(key).second)
            throw ParseError(context + ": duplicate attack kind \"" + key + "\"");
        try {
            cfg.attack_kinds.push_back(attack_kind_from_key(key));
        } catch (const std::invalid_argument& e) {
            throw ParseError(context + ": " + e.what());
        }
    }

    try {
        cfg.language = language_from_key(
            detail::config_get_or<std::string>(values, "language", "python", context));
        if (values.count("privacy_field"))
            cfg.privacy_field = privacy_field_from_key(
                detail::config_get<std::string>(values, "privacy_field", context));
    } catch (const std::invalid_argument& e) {
        throw ParseError(context + ": " + e.what());
    }

    cfg.trials_per_query = detail::config_positive_int(values, "trials_per_query", 5, context);
    cfg.max_parallel = detail::config_positive_int(values, "max_parallel", 1, context);
    cfg.backend_id = detail::config_get_or<std::string>(values, "backend", "", context);
    std::int64_t retry_max = detail::config_get_or<std::int64_t>(values, "retry_max", 3, context);
    if (retry_max < 0) throw ParseError(context + ": \"retry_max\" must be >= 0");
    cfg.retry_max = static_cast<int>(retry_max);
    cfg.retry_backoff_ms =
        detail::config_get_or<std::int64_t>(values, "retry_backoff_ms", 500, context);
    if (cfg.retry_backoff_ms < 0)
        throw ParseError(context + ": \"retry_backoff_ms\" must be >= 0");
    cfg.politeness_delay_ms =
        detail::config_get_or<std::int64_t>(values, "politeness_delay_ms", 0, context);
    if (cfg.politeness_delay_ms < 0)
        throw ParseError(context + ": \"politeness_delay_ms\" must be >= 0");
    cfg.level1_guiding_words =
        detail::config_get_or<bool>(values, "level1_guiding_words", true, context);

    GeneratorConfig defaults;
    cfg.generator.static_prompt =
        detail::config_get_or<std::string>(values, "static_prompt", defaults.static_prompt,
                                           context);
    cfg.generator.guiding_words =
        detail::config_get_or<std::string>(values, "guiding_words", defaults.guiding_words,
                                           context);
    cfg.generator.answer_var_name =
        detail::config_get_or<std::string>(values, "answer_var", defaults.answer_var_name,
                                           context);
    cfg.generator.sensitive_lexicon = detail::config_get_or<std::vector<std::string>>(
        values, "sensitive_lexicon", defaults.sensitive_lexicon, context);
    cfg.generator.carrier_sentence = detail::config_get_or<std::string>(
        values, "carrier_sentence", defaults.carrier_sentence, context);
    cfg.generator.split_count_max = detail::config_positive_int(
        values, "split_count_max", defaults.split_count_max, context);
    if (cfg.generator.split_count_max < 2)
        throw ParseError(context + ": \"split_count_max\" must be >= 2");

    return cfg;
}

inline CampaignConfig load_campaign_config(const std::string& path) {
    return campaign_config_from_values(parse_config_file(path), path);
}

}  // namespace redteam
