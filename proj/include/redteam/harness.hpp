#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <deque>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "redteam/backend.hpp"
#include "redteam/config.hpp"
#include "redteam/payload_gen.hpp"
#include "redteam/postprocess.hpp"
#include "redteam/trial.hpp"

namespace redteam {

class CampaignError : public std::runtime_error {
  public:
    explicit CampaignError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t hash = 1469598103934665603ULL;
    for (unsigned char c : data) {
        hash ^= c;
        hash *= 1099511628211ULL;
    }
    return hash;
}

}  // namespace detail

// Content hash over everything the backend sees; stable across runs so a
// resumed campaign can detect generator-config drift.
inline std::string request_digest(const AttackPayload& payload) {
    std::string framed;
    auto add = [&framed](const std::string& piece) {
        framed += std::to_string(piece.size());
        framed += ':';
        framed += piece;
    };
    add(attack_kind_key(payload.kind));
    add(language_key(payload.language));
    for (const SourceFile& file : payload.files) {
        add(file.name);
        add(file.content);
    }
    add(std::to_string(payload.primary_file));
    add(payload.trigger.cursor_anchor);
    add(payload.trigger.guiding_words);
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(detail::fnv1a64(framed)));
    return std::string("fnv1a:") + buf;
}

inline std::string utc_timestamp() {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[24];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// Exponential backoff for TransportError retries: wait before re-attempting,
// or nullopt once `attempt` failures have exhausted the budget.
inline std::optional<std::int64_t> retry_policy(int attempt, const CampaignConfig& cfg) {
    if (attempt < 1) throw std::invalid_argument("retry_policy: attempt must be >= 1");
    if (attempt > cfg.retry_max) return std::nullopt;
    int exponent = attempt - 1;
    std::int64_t wait = exponent >= 20 ? 30000 : cfg.retry_backoff_ms << exponent;
    return std::min<std::int64_t>(wait, 30000);
}

struct CampaignSummary {
    size_t planned = 0;
    size_t resumed = 0;
    size_t executed = 0;
    std::map<std::string, size_t> finish_reasons;  // over all planned records
    double transport_error_rate = 0.0;
    std::string trials_path;
};

inline json campaign_summary_to_json(const CampaignSummary& s) {
    return json{{"planned", s.planned},
                {"resumed", s.resumed},
                {"executed", s.executed},
                {"finish_reasons", s.finish_reasons},
                {"transport_error_rate", s.transport_error_rate},
                {"trials_path", s.trials_path}};
}

namespace detail {

// Single-writer hand-off: workers push finished records, the writer thread
// appends them to the trials file and flushes per line.
class TrialWriter {
  public:
    explicit TrialWriter(const std::string& path) : out_(path, std::ios::app | std::ios::binary) {
        if (!out_) throw CampaignError("cannot open trials file for append: " + path);
        thread_ = std::thread([this] { run(); });
    }

    ~TrialWriter() {
        if (thread_.joinable()) close();
    }

    void push(TrialRecord record) {
        {
            std::lock_guard lock(mutex_);
            queue_.push_back(std::move(record));
        }
        ready_.notify_one();
    }

    void close() {
        {
            std::lock_guard lock(mutex_);
            done_ = true;
        }
        ready_.notify_one();
        thread_.join();
        out_.close();
    }

  private:
    void run() {
        std::unique_lock lock(mutex_);
        while (true) {
            ready_.wait(lock, [this] { return done_ || !queue_.empty(); });
            while (!queue_.empty()) {
                TrialRecord record = std::move(queue_.front());
                queue_.pop_front();
                lock.unlock();
                out_ << trial_to_json(record).dump() << '\n';
                out_.flush();
                lock.lock();
            }
            if (done_) return;
        }
    }

    std::ofstream out_;
    std::thread thread_;
    std::mutex mutex_;
    std::condition_variable ready_;
    std::deque<TrialRecord> queue_;
    bool done_ = false;
};

struct WorkItem {
    TrialRecord seed;          // identifying fields filled in; response pending
    const AttackPayload* payload;
};

}  // namespace detail

inline CampaignSummary run_campaign(const CampaignConfig& cfg, Backend& backend) {
    namespace fs = std::filesystem;
    if (cfg.trials_per_query < 1) throw CampaignError("trials_per_query must be >= 1");
    if (cfg.max_parallel < 1) throw CampaignError("max_parallel must be >= 1");
    if (cfg.attack_kinds.empty()) throw CampaignError("no attack kinds configured");
    if (cfg.output_dir.empty()) throw CampaignError("output_dir not set");

    Corpus corpus = load_corpus(cfg.corpus_path);
    fs::create_directories(cfg.output_dir);
    const std::string trials_path = (fs::path(cfg.output_dir) / "trials.jsonl").string();

    // Resume state. A torn final line from an interrupted run is dropped by
    // rewriting the file with only the intact records before appending.
    std::vector<TrialRecord> existing;
    if (fs::exists(trials_path)) {
        existing = load_trials(trials_path, /*tolerate_trailing_garbage=*/true);
        std::ofstream rewrite(trials_path, std::ios::trunc | std::ios::binary);
        if (!rewrite) throw CampaignError("cannot rewrite trials file: " + trials_path);
        for (const TrialRecord& record : existing)
            rewrite << trial_to_json(record).dump() << '\n';
    }
    std::map<std::string, const TrialRecord*> existing_by_key;
    for (const TrialRecord& record : existing) existing_by_key[trial_key(record)] = &record;

    // Payloads are deterministic per (query, kind); build them up front so
    // generation errors surface before any backend call.
    BuildOptions options;
    options.level1_guiding_words = cfg.level1_guiding_words;
    options.privacy_field = cfg.privacy_field;
    std::map<std::pair<std::string, AttackKind>, AttackPayload> payloads;
    for (const Query& query : corpus.queries) {
        for (AttackKind kind : cfg.attack_kinds) {
            AttackPayload payload = build_attack(kind, query, cfg.generator, cfg.language, options);
            validate_payload(payload);
            payloads.emplace(std::make_pair(query.id, kind), std::move(payload));
        }
    }

    CampaignSummary summary;
    summary.trials_path = trials_path;
    std::vector<detail::WorkItem> pending;
    for (const Query& query : corpus.queries) {
        for (AttackKind kind : cfg.attack_kinds) {
            const AttackPayload& payload = payloads.at({query.id, kind});
            const std::string digest = request_digest(payload);
            for (int trial = 0; trial < cfg.trials_per_query; ++trial) {
                TrialRecord seed;
                seed.query_id = query.id;
                seed.category = query.category;
                seed.attack_kind = kind;
                seed.trial_index = trial;
                seed.backend_id = backend.id();
                seed.request_digest = digest;
                if (kind == AttackKind::PrivacyStep2)
                    seed.privacy_field = privacy_field_key(cfg.privacy_field);
                ++summary.planned;

                auto it = existing_by_key.find(trial_key(seed));
                if (it != existing_by_key.end()) {
                    if (it->second->request_digest != digest)
                        throw CampaignError(
                            "resume digest mismatch for " + query.id + "/" +
                            attack_kind_key(kind) + " trial " + std::to_string(trial) +
                            ": trials file has " + it->second->request_digest + ", current config "
                            "generates " + digest + "; the generator config has drifted — use a "
                            "fresh output_dir");
                    ++summary.resumed;
                    ++summary.finish_reasons[finish_reason_key(
                        it->second->response.finish_reason)];
                    continue;
                }
                pending.push_back({std::move(seed), &payload});
            }
        }
    }

    std::mutex result_mutex;
    std::vector<TrialRecord> fresh;
    if (!pending.empty()) {
        detail::TrialWriter writer(trials_path);
        std::atomic<size_t> next{0};
        auto worker = [&] {
            while (true) {
                size_t index = next.fetch_add(1);
                if (index >= pending.size()) return;
                const detail::WorkItem& item = pending[index];
                CompletionRequest request = completion_request_from_payload(*item.payload);

                CompletionResponse response;
                for (int attempt = 1;; ++attempt) {
                    if (cfg.politeness_delay_ms > 0)
                        std::this_thread::sleep_for(
                            std::chrono::milliseconds(cfg.politeness_delay_ms));
                    response = backend.complete(request);
                    if (response.finish_reason != FinishReason::TransportError) break;
                    auto wait = retry_policy(attempt, cfg);
                    if (!wait) break;
                    if (*wait > 0)
                        std::this_thread::sleep_for(std::chrono::milliseconds(*wait));
                }

                TrialRecord record = item.seed;
                record.response = std::move(response);
                record.timestamp = utc_timestamp();
                if (record.response.finish_reason != FinishReason::TransportError) {
                    std::optional<PrivacyField> field;
                    if (!record.privacy_field.empty())
                        field = privacy_field_from_key(record.privacy_field);
                    record.extracted_answer =
                        extract_answer(record.response.raw_text, record.attack_kind,
                                       item.payload->language, field);
                }
                writer.push(record);
                {
                    std::lock_guard lock(result_mutex);
                    fresh.push_back(std::move(record));
                }
            }
        };

        size_t thread_count = std::min<size_t>(cfg.max_parallel, pending.size());
        std::vector<std::thread> threads;
        threads.reserve(thread_count);
        for (size_t i = 0; i < thread_count; ++i) threads.emplace_back(worker);
        for (std::thread& t : threads) t.join();
        writer.close();
    }

    summary.executed = fresh.size();
    for (const TrialRecord& record : fresh)
        ++summary.finish_reasons[finish_reason_key(record.response.finish_reason)];
    size_t transport = summary.finish_reasons.count("transport_error")
                           ? summary.finish_reasons.at("transport_error")
                           : 0;
    summary.transport_error_rate =
        summary.planned == 0 ? 0.0 : static_cast<double>(transport) / summary.planned;

    // Close-out sort: query-major in corpus order, kind in config order,
    // trial innermost. Records outside this campaign's scope keep their
    // relative order after the in-scope ones.
    std::map<std::string, size_t> query_pos;
    for (size_t i = 0; i < corpus.queries.size(); ++i) query_pos[corpus.queries[i].id] = i;
    std::map<AttackKind, size_t> kind_pos;
    for (size_t i = 0; i < cfg.attack_kinds.size(); ++i) kind_pos[cfg.attack_kinds[i]] = i;
    auto rank = [&](const TrialRecord& r) {
        auto q = query_pos.find(r.query_id);
        auto k = kind_pos.find(r.attack_kind);
        return std::tuple<size_t, size_t, int>(
            q == query_pos.end() ? std::numeric_limits<size_t>::max() : q->second,
            k == kind_pos.end() ? std::numeric_limits<size_t>::max() : k->second, r.trial_index);
    };
    std::vector<TrialRecord> all = std::move(existing);
    for (TrialRecord& record : fresh) all.push_back(std::move(record));
    std::stable_sort(all.begin(), all.end(),
                     [&](const TrialRecord& a, const TrialRecord& b) { return rank(a) < rank(b); });
    {
        std::ofstream out(trials_path, std::ios::trunc | std::ios::binary);
        if (!out) throw CampaignError("cannot rewrite trials file: " + trials_path);
        for (const TrialRecord& record : all) out << trial_to_json(record).dump() << '\n';
    }
    return summary;
}

}  // namespace redteam
