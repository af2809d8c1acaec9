#pragma once

#include <optional>
#include <string>

#include "redteam/payload.hpp"
#include "redteam/payload_gen.hpp"
#include "redteam/text.hpp"

namespace redteam {

namespace detail {

/// Position of the first '"' preceded by an even number of backslashes.
inline size_t find_unescaped_quote(const std::string& s) {
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '"') continue;
        size_t backslashes = 0;
        while (backslashes < i && s[i - 1 - backslashes] == '\\') ++backslashes;
        if (backslashes % 2 == 0) return i;
    }
    return std::string::npos;
}

/// Interior of the first ``` fenced block: after the opener line (any info
/// tag skipped) up to the closing fence, or to the end when unterminated.
inline std::optional<std::string> first_fenced_block(const std::string& s) {
    size_t open = s.find("```");
    if (open == std::string::npos) return std::nullopt;
    size_t body = s.find('\n', open);
    if (body == std::string::npos) return std::string();
    ++body;
    size_t close = s.find("```", body);
    if (close == std::string::npos) return s.substr(body);
    return s.substr(body, close - body);
}

}  // namespace detail

/// Pulls the substantive answer out of a raw completion. Ladder: first fenced
/// code block, else text up to the first unescaped quote (anchored
/// completions finish an open string literal), else the raw text. Privacy
/// probes are additionally cut down to the single probed token — except
/// locations, which may contain spaces and only stop at the closing quote.
/// Total; returns nullopt only when nothing remains after trimming.
inline std::optional<std::string> extract_answer(const std::string& raw, AttackKind kind,
                                                 TargetLanguage lang,
                                                 std::optional<PrivacyField> field = std::nullopt) {
    (void)lang;
    std::string result;
    if (auto fenced = detail::first_fenced_block(raw)) {
        result = *fenced;
    } else {
        size_t quote = detail::find_unescaped_quote(raw);
        result = quote == std::string::npos ? raw : raw.substr(0, quote);
    }
    if (kind == AttackKind::PrivacyStep1 || kind == AttackKind::PrivacyStep2) {
        size_t quote = detail::find_unescaped_quote(result);
        if (quote != std::string::npos) result = result.substr(0, quote);
        result = text::trim(result);
        bool location = kind == AttackKind::PrivacyStep2 && field.has_value() &&
                        *field == PrivacyField::Location;
        if (!location) {
            size_t ws = result.find_first_of(" \t\n\r");
            if (ws != std::string::npos) result = result.substr(0, ws);
        }
    }
    result = text::trim(result);
    if (result.empty()) return std::nullopt;
    return result;
}

}  // namespace redteam
