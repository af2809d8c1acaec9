#pragma once

#include <array>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "redteam/jsonl.hpp"

namespace redteam {

/// The four restricted query categories campaigns are evaluated over.
enum class QueryCategory { IllegalContent, HateSpeech, Pornography, HarmfulContent };

inline constexpr std::array<QueryCategory, 4> kAllCategories = {
    QueryCategory::IllegalContent,
    QueryCategory::HateSpeech,
    QueryCategory::Pornography,
    QueryCategory::HarmfulContent,
};

inline std::string category_key(QueryCategory cat) {
    switch (cat) {
        case QueryCategory::IllegalContent: return "illegal";
        case QueryCategory::HateSpeech: return "hate";
        case QueryCategory::Pornography: return "porn";
        case QueryCategory::HarmfulContent: return "harmful";
    }
    return "harmful";
}

inline std::string category_display_name(QueryCategory cat) {
    switch (cat) {
        case QueryCategory::IllegalContent: return "Illegal Content";
        case QueryCategory::HateSpeech: return "Hate Speech";
        case QueryCategory::Pornography: return "Pornography";
        case QueryCategory::HarmfulContent: return "Harmful Content";
    }
    return "Harmful Content";
}

inline QueryCategory category_from_key(const std::string& key) {
    for (QueryCategory cat : kAllCategories) {
        if (category_key(cat) == key) return cat;
    }
    throw ParseError("unknown category: \"" + key + "\" (expected illegal|hate|porn|harmful)");
}

struct Query {
    std::string id;
    QueryCategory category = QueryCategory::HarmfulContent;
    std::string text;

    friend bool operator==(const Query&, const Query&) = default;
};

struct Corpus {
    std::vector<Query> queries;
    std::string source_path;

    size_t size() const { return queries.size(); }

    std::map<QueryCategory, size_t> category_counts() const {
        std::map<QueryCategory, size_t> counts;
        for (QueryCategory cat : kAllCategories) counts[cat] = 0;
        for (const Query& q : queries) counts[q.category]++;
        return counts;
    }

    const Query* find(const std::string& id) const {
        for (const Query& q : queries) {
            if (q.id == id) return &q;
        }
        return nullptr;
    }
};

namespace detail {

inline std::string trim_copy(const std::string& s) {
    size_t begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    size_t end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

}  // namespace detail

/// Loads a line-delimited corpus of {"id", "category", "text"} records.
/// With strict_shape, enforces the 20-per-category / 80-total shape.
inline Corpus load_corpus(const std::string& path, bool strict_shape = false) {
    Corpus corpus;
    corpus.source_path = path;
    std::set<std::string> seen_ids;
    for_each_jsonl(path, [&](size_t lineno, const json& obj) {
        auto context = [&](const std::string& msg) {
            return ParseError(path + ":" + std::to_string(lineno) + ": " + msg);
        };
        if (!obj.contains("id") || !obj["id"].is_string() || !obj.contains("category") ||
            !obj["category"].is_string() || !obj.contains("text") || !obj["text"].is_string()) {
            throw context("record must have string fields id, category, text");
        }
        Query q;
        q.id = obj["id"].get<std::string>();
        q.text = obj["text"].get<std::string>();
        try {
            q.category = category_from_key(obj["category"].get<std::string>());
        } catch (const ParseError& e) {
            throw context(e.what());
        }
        if (q.id.empty()) {
            throw context("empty id");
        }
        if (detail::trim_copy(q.text).empty()) {
            throw context("query text empty after trimming");
        }
        if (!seen_ids.insert(q.id).second) {
            throw context("duplicate query id \"" + q.id + "\"");
        }
        corpus.queries.push_back(std::move(q));
    });
    if (strict_shape) {
        auto counts = corpus.category_counts();
        bool ok = corpus.size() == 80;
        for (const auto& [cat, n] : counts) ok = ok && n == 20;
        if (!ok) {
            std::ostringstream msg;
            msg << path << ": strict shape violation, expected 20 per category / 80 total, got";
            for (QueryCategory cat : kAllCategories) {
                msg << " " << category_key(cat) << "=" << counts[cat];
            }
            msg << " total=" << corpus.size();
            throw ParseError(msg.str());
        }
    }
    return corpus;
}

inline std::string corpus_to_jsonl(const Corpus& corpus) {
    std::ostringstream out;
    for (const Query& q : corpus.queries) {
        json obj{{"id", q.id}, {"category", category_key(q.category)}, {"text", q.text}};
        out << obj.dump() << "\n";
    }
    return out.str();
}

inline void save_corpus(const Corpus& corpus, const std::string& path) {
    write_file(path, corpus_to_jsonl(corpus));
}

/// Order-preserving sub-corpus of one category.
inline Corpus filter_by_category(const Corpus& corpus, QueryCategory cat) {
    Corpus out;
    out.source_path = corpus.source_path;
    for (const Query& q : corpus.queries) {
        if (q.category == cat) out.queries.push_back(q);
    }
    return out;
}

}  // namespace redteam
