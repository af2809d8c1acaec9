#pragma once

#include <optional>
#include <string>
#include <vector>

#include "redteam/backend.hpp"
#include "redteam/corpus.hpp"
#include "redteam/jsonl.hpp"
#include "redteam/payload.hpp"

namespace redteam {

/// One backend call: the campaign coordinates identifying it, the response,
/// and the postprocessed answer. privacy_field distinguishes email/location
/// probes sharing a query id; empty for all other attacks.
struct TrialRecord {
    std::string query_id;
    QueryCategory category = QueryCategory::IllegalContent;
    AttackKind attack_kind = AttackKind::Level1GuidedTrigger;
    int trial_index = 0;
    std::string backend_id;
    std::string request_digest;
    CompletionResponse response;
    std::optional<std::string> extracted_answer;
    std::string timestamp;
    std::string privacy_field;
};

/// Uniqueness/resume key within a campaign.
inline std::string trial_key(const TrialRecord& t) {
    return t.query_id + '\x1f' + attack_kind_key(t.attack_kind) + '\x1f' +
           std::to_string(t.trial_index) + '\x1f' + t.backend_id + '\x1f' + t.privacy_field;
}

inline json trial_to_json(const TrialRecord& t) {
    json j{
        {"query_id", t.query_id},
        {"category", category_key(t.category)},
        {"attack_kind", attack_kind_key(t.attack_kind)},
        {"trial_index", t.trial_index},
        {"backend_id", t.backend_id},
        {"request_digest", t.request_digest},
        {"response",
         {{"raw_text", t.response.raw_text},
          {"finish_reason", finish_reason_key(t.response.finish_reason)},
          {"latency_ms", t.response.latency_ms},
          {"diagnostic", t.response.diagnostic}}},
        {"timestamp", t.timestamp},
    };
    if (t.extracted_answer) j["extracted_answer"] = *t.extracted_answer;
    if (!t.privacy_field.empty()) j["privacy_field"] = t.privacy_field;
    return j;
}

inline TrialRecord trial_from_json(const json& j, const std::string& context) {
    TrialRecord t;
    try {
        t.query_id = j.at("query_id").get<std::string>();
        t.category = category_from_key(j.at("category").get<std::string>());
        t.attack_kind = attack_kind_from_key(j.at("attack_kind").get<std::string>());
        t.trial_index = j.at("trial_index").get<int>();
        t.backend_id = j.at("backend_id").get<std::string>();
        t.request_digest = j.at("request_digest").get<std::string>();
        const json& r = j.at("response");
        t.response.raw_text = r.at("raw_text").get<std::string>();
        t.response.finish_reason = finish_reason_from_key(r.at("finish_reason").get<std::string>());
        t.response.latency_ms = r.at("latency_ms").get<std::int64_t>();
        t.response.diagnostic = r.value("diagnostic", "");
        t.timestamp = j.at("timestamp").get<std::string>();
        if (j.contains("extracted_answer")) {
            t.extracted_answer = j.at("extracted_answer").get<std::string>();
        }
        t.privacy_field = j.value("privacy_field", "");
    } catch (const json::exception& e) {
        throw ParseError(context + ": invalid trial record: " + e.what());
    }
    return t;
}

/// Loads a trials file; `tolerate_trailing_garbage` accepts a truncated final
/// line (interrupted campaign).
inline std::vector<TrialRecord> load_trials(const std::string& path,
                                            bool tolerate_trailing_garbage = false) {
    std::vector<TrialRecord> trials;
    for_each_jsonl(
        path,
        [&](size_t lineno, const json& j) {
            trials.push_back(trial_from_json(j, path + ":" + std::to_string(lineno)));
        },
        tolerate_trailing_garbage);
    return trials;
}

}  // namespace redteam
