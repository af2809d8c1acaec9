#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "redteam/config.hpp"
#include "redteam/directory_client.hpp"
#include "redteam/evaluate.hpp"
#include "redteam/harness.hpp"
#include "redteam/http_backend.hpp"
#include "redteam/report.hpp"

using namespace redteam;

namespace {

constexpr int kExitRuntime = 2;
constexpr int kExitEthics = 3;

constexpr const char* kEthicsWarning =
    "WARNING: you are about to send adversarial payloads to a live service.\n"
    "Run this only against systems you are authorized to test, within an\n"
    "agreed engagement scope. Pass --i-understand-ethics to acknowledge.";

std::unique_ptr<Backend> resolve_backend(const std::string& backend_id,
                                         const std::string& default_auth_env = "") {
    const std::string mock_prefix = "mock:";
    const std::string http_prefix = "http:";
    if (backend_id.rfind(mock_prefix, 0) == 0)
        return make_mock_backend(load_mock_scenario(backend_id.substr(mock_prefix.size())));
    if (backend_id.rfind(http_prefix, 0) == 0)
        return std::make_unique<HttpBackend>(
            load_http_backend_config(backend_id.substr(http_prefix.size()), default_auth_env));
    throw std::runtime_error("unknown backend id \"" + backend_id +
                             "\" (expected mock:<scenario.json> or http:<config.json>)");
}

std::string read_stream(std::istream& in) {
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_or_die(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::trunc | std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

// Rebuilds the query population a verdicts scope ran against. Campaigns plan
// every corpus query for every kind, so the records for one (kind, backend)
// enumerate that corpus slice exactly.
Corpus corpus_for_scope(const std::vector<TrialRecord>& trials, AttackKind kind,
                        const std::string& backend_id) {
    Corpus corpus;
    std::set<std::string> seen;
    for (const TrialRecord& t : trials) {
        if (t.attack_kind != kind || t.backend_id != backend_id) continue;
        if (seen.insert(t.query_id).second)
            corpus.queries.push_back({t.query_id, t.category, ""});
    }
    return corpus;
}

Corpus corpus_from_all_trials(const std::vector<TrialRecord>& trials) {
    Corpus corpus;
    std::set<std::string> seen;
    for (const TrialRecord& t : trials) {
        if (seen.insert(t.query_id).second)
            corpus.queries.push_back({t.query_id, t.category, ""});
    }
    return corpus;
}

Corpus corpus_from_verdicts(const std::vector<Verdict>& verdicts, AttackKind kind,
                            const std::string& backend_id) {
    Corpus corpus;
    std::set<std::string> seen;
    for (const Verdict& v : verdicts) {
        if (v.attack_kind != kind || v.backend_id != backend_id) continue;
        if (seen.insert(v.query_id).second)
            corpus.queries.push_back({v.query_id, QueryCategory::IllegalContent, ""});
    }
    return corpus;
}

std::vector<std::pair<AttackKind, std::string>> scopes_of(const std::vector<Verdict>& verdicts) {
    std::vector<std::pair<AttackKind, std::string>> scopes;
    std::set<std::pair<std::string, std::string>> seen;
    for (const Verdict& v : verdicts) {
        if (seen.insert({attack_kind_key(v.attack_kind), v.backend_id}).second)
            scopes.emplace_back(v.attack_kind, v.backend_id);
    }
    return scopes;
}

std::string breakdown_markdown(const CategoryBreakdown& breakdown) {
    std::ostringstream out;
    out << "| category |";
    for (const std::string& backend : breakdown.columns) out << ' ' << backend << " |";
    out << "\n| --- |";
    for (size_t i = 0; i < breakdown.columns.size(); ++i) out << " --- |";
    out << '\n';
    for (const CategoryBreakdown::Row& row : breakdown.rows) {
        out << "| " << category_display_name(row.category) << " |";
        for (const auto& cell : row.cells)
            out << ' ' << (cell ? render_percent(*cell) : std::string("-")) << " |";
        out << '\n';
    }
    return out.str();
}

struct MarkerLists {
    std::vector<std::string> harm = default_harm_markers();
    std::vector<std::string> refusal = default_refusal_markers();
};

MarkerLists load_markers(const std::string& path) {
    MarkerLists markers;
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open markers file: " + path);
    json j;
    try {
        in >> j;
        if (j.contains("harm")) markers.harm = j.at("harm").get<std::vector<std::string>>();
        if (j.contains("refusal"))
            markers.refusal = j.at("refusal").get<std::vector<std::string>>();
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    return markers;
}

int cmd_generate(const std::string& corpus_path, const std::string& attack,
                 const std::string& lang, const std::string& out_dir,
                 const std::string& field, bool no_guiding_words,
                 const std::string& platform_prefix) {
    Corpus corpus = load_corpus(corpus_path);
    AttackKind kind = attack_kind_from_key(attack);
    GeneratorConfig generator;
    BuildOptions options;
    options.level1_guiding_words = !no_guiding_words;
    options.privacy_field = privacy_field_from_key(field);
    if (!platform_prefix.empty()) options.platform_prefix = platform_prefix;
    TargetLanguage language = language_from_key(lang);

    size_t written = 0;
    for (const Query& query : corpus.queries) {
        AttackPayload payload = build_attack(kind, query, generator, language, options);
        validate_payload(payload);
        write_payload_tree(payload, out_dir);
        ++written;
    }
    std::cout << "wrote " << written << " payloads under " << out_dir << "/"
              << attack_kind_key(kind) << "/\n";
    return 0;
}

int cmd_run(const std::string& config_path, const std::string& backend_override,
            int parallel_override, bool ethics_ack) {
    CampaignConfig cfg = load_campaign_config(config_path);
    if (!backend_override.empty()) cfg.backend_id = backend_override;
    if (parallel_override > 0) cfg.max_parallel = parallel_override;
    if (cfg.backend_id.empty())
        throw CLI::ValidationError("run", "no backend configured (set `backend` or --backend)");

    if (cfg.backend_id.rfind("mock:", 0) != 0) {
        std::cerr << kEthicsWarning << "\n";
        if (!ethics_ack) return kExitEthics;
        std::cerr << "--i-understand-ethics acknowledged; proceeding.\n";
    }

    std::unique_ptr<Backend> backend = resolve_backend(cfg.backend_id);
    CampaignSummary summary = run_campaign(cfg, *backend);
    std::cout << campaign_summary_to_json(summary).dump(2) << "\n";
    return 0;
}

int cmd_extract(const std::string& kind_key, const std::string& lang,
                const std::string& field) {
    AttackKind kind = attack_kind_from_key(kind_key);
    std::optional<PrivacyField> privacy;
    if (!field.empty()) privacy = privacy_field_from_key(field);
    std::string raw = read_stream(std::cin);
    auto answer = extract_answer(raw, kind, language_from_key(lang), privacy);
    if (answer) std::cout << *answer << "\n";
    return 0;
}

int cmd_judge(const std::string& trials_path, const std::string& corpus_path,
              const std::string& out_path, const std::string& judge_kind,
              const std::string& markers_path, const std::string& judge_backend_id,
              const std::string& policy_path) {
    std::vector<TrialRecord> trials = load_trials(trials_path);
    std::map<std::string, std::string> query_text;
    if (!corpus_path.empty()) {
        Corpus corpus = load_corpus(corpus_path);
        for (const Query& q : corpus.queries) query_text[q.id] = q.text;
    }

    MarkerLists markers;
    if (!markers_path.empty()) markers = load_markers(markers_path);

    std::unique_ptr<Backend> judge_backend;
    std::string policy;
    if (judge_kind == "llm") {
        if (judge_backend_id.empty())
            throw CLI::ValidationError("judge", "--judge llm requires --judge-backend");
        if (policy_path.empty())
            throw CLI::ValidationError("judge", "--judge llm requires --policy");
        judge_backend = resolve_backend(judge_backend_id, "REDTEAM_JUDGE_API_KEY");
        std::ifstream in(policy_path, std::ios::binary);
        if (!in) throw std::runtime_error("cannot open policy file: " + policy_path);
        policy = read_stream(in);
    }

    std::vector<Verdict> verdicts;
    std::map<std::string, size_t> outcome_counts;
    for (const TrialRecord& t : trials) {
        auto text = query_text.find(t.query_id);
        Query query{t.query_id, t.category, text == query_text.end() ? "" : text->second};
        Verdict v = judge_kind == "llm"
                        ? judge_llm(query, t.extracted_answer, policy, *judge_backend,
                                    markers.refusal)
                        : judge_keyword(query, t.extracted_answer, markers.harm, markers.refusal);
        v.attack_kind = t.attack_kind;
        v.trial_index = t.trial_index;
        v.backend_id = t.backend_id;
        verdicts.push_back(std::move(v));
        ++outcome_counts[outcome_key(verdicts.back().outcome)];
    }
    save_verdicts(verdicts, out_path);
    std::cout << json{{"verdicts", verdicts.size()}, {"outcomes", outcome_counts}}.dump(2)
              << "\n";
    return 0;
}

int cmd_audit(const std::vector<std::string>& trials_paths, const std::string& directory_spec,
              const std::string& out_path) {
    std::vector<TrialRecord> trials;
    for (const std::string& path : trials_paths) {
        std::vector<TrialRecord> batch = load_trials(path);
        trials.insert(trials.end(), batch.begin(), batch.end());
    }

    std::unique_ptr<UserDirectory> directory;
    const std::string live_prefix = "live:";
    if (directory_spec.rfind(live_prefix, 0) == 0) {
        directory = std::make_unique<LiveDirectory>(
            load_directory_client_config(directory_spec.substr(live_prefix.size())));
    } else {
        directory = std::make_unique<FixtureDirectory>(FixtureDirectory::load(directory_spec));
    }

    PrivacyAuditSummary summary = privacy_audit(trials, *directory);
    std::string rendered = privacy_audit_to_json(summary).dump(2) + "\n";
    std::cout << rendered;
    if (!out_path.empty()) write_or_die(out_path, rendered);
    return 0;
}

int cmd_report(const std::string& trials_path, const std::string& verdicts_path,
               const std::string& format, const std::string& compare_path, bool by_category,
               const std::string& series_out) {
    std::vector<TrialRecord> trials = load_trials(trials_path);
    std::vector<Verdict> verdicts = load_verdicts(verdicts_path);

    std::vector<AsrResult> results;
    for (const auto& [kind, backend_id] : scopes_of(verdicts)) {
        Corpus scope_corpus = corpus_for_scope(trials, kind, backend_id);
        if (scope_corpus.queries.empty())
            throw std::runtime_error("verdicts reference " + attack_kind_key(kind) + " on \"" +
                                     backend_id + "\" but the trials file has no such records");
        results.push_back(compute_asr(verdicts, scope_corpus, {kind, backend_id, {}}));
    }
    AsrTable table = build_asr_table(results);

    struct AblationRow {
        AttackKind kind;
        std::string backend_id;
        double current;
        double delta_pp;
    };
    std::vector<AblationRow> ablations;
    if (!compare_path.empty()) {
        std::vector<Verdict> baseline_verdicts = load_verdicts(compare_path);
        std::vector<AsrResult> baseline;
        for (const auto& [kind, backend_id] : scopes_of(baseline_verdicts)) {
            baseline.push_back(compute_asr(baseline_verdicts,
                                           corpus_from_verdicts(baseline_verdicts, kind,
                                                                backend_id),
                                           {kind, backend_id, {}}));
        }
        for (const AsrResult& current : results) {
            const AsrResult* match = nullptr;
            for (const AsrResult& b : baseline) {
                if (b.scope.attack_kind == current.scope.attack_kind &&
                    b.scope.backend_id == current.scope.backend_id) {
                    match = &b;
                    break;
                }
            }
            if (!match && results.size() == 1 && baseline.size() == 1 &&
                baseline[0].scope.backend_id == current.scope.backend_id)
                match = &baseline[0];
            if (match)
                ablations.push_back({current.scope.attack_kind, current.scope.backend_id,
                                     current.mean_asr, ablation_delta(*match, current)});
        }
    }

    CategoryBreakdown breakdown;
    if (by_category || !series_out.empty()) {
        breakdown = category_breakdown(verdicts, corpus_from_all_trials(trials));
        for (const std::string& warning : breakdown.warnings)
            std::cerr << "warning: " << warning << "\n";
        if (!series_out.empty()) write_or_die(series_out, breakdown_series_csv(breakdown));
    }

    if (format == "md") {
        std::cout << "# Attack success rates\n\n" << asr_table_markdown(table);
        if (!ablations.empty()) {
            std::cout << "\n## Deltas vs baseline\n\n";
            for (const AblationRow& row : ablations)
                std::cout << "- " << attack_kind_display(row.kind) << " on " << row.backend_id
                          << ": " << render_percent(row.current) << " "
                          << render_signed_pp(row.delta_pp) << "\n";
        }
        if (by_category)
            std::cout << "\n## By category\n\n" << breakdown_markdown(breakdown);
    } else if (format == "csv") {
        std::cout << asr_table_csv(table);
        if (!ablations.empty()) {
            std::cout << "\nablation_attack,backend,asr,delta\n";
            for (const AblationRow& row : ablations)
                std::cout << attack_kind_key(row.kind) << ',' << row.backend_id << ','
                          << render_percent(row.current) << ','
                          << render_signed_pp(row.delta_pp) << "\n";
        }
        if (by_category) std::cout << "\n" << breakdown_csv(breakdown);
    } else {
        json out{{"asr_table", asr_table_json(table)}};
        if (!ablations.empty()) {
            json rows = json::array();
            for (const AblationRow& row : ablations)
                rows.push_back(json{{"attack", attack_kind_key(row.kind)},
                                    {"backend", row.backend_id},
                                    {"asr", row.current},
                                    {"rendered", render_percent(row.current)},
                                    {"delta_pp", row.delta_pp},
                                    {"delta_rendered", render_signed_pp(row.delta_pp)}});
            out["ablation"] = rows;
        }
        if (by_category) out["category_breakdown"] = breakdown_json(breakdown);
        std::cout << out.dump(2) << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Red-team harness for code-completion services: generates code-shaped attack\n"
        "payloads, runs campaigns against mock or HTTP backends, and scores the\n"
        "results. Use only against systems you are authorized to test."};
    app.require_subcommand(1);

    // generate
    auto* generate = app.add_subcommand("generate", "Write attack payload trees for a corpus");
    std::string gen_corpus, gen_attack, gen_lang = "python", gen_out, gen_field = "email";
    std::string gen_prefix;
    bool gen_no_guiding = false;
    generate->add_option("--corpus", gen_corpus, "Query corpus JSONL")->required();
    generate->add_option("--attack", gen_attack,
                         "Attack kind: filename|crossfile|level1|level2|level2_complex|"
                         "privacy_step1|privacy_step2")
        ->required();
    generate->add_option("--lang", gen_lang, "Payload language: python|go");
    generate->add_option("--out", gen_out, "Output directory")->required();
    generate->add_option("--field", gen_field, "Privacy probe field: email|location");
    generate->add_option("--platform-prefix", gen_prefix,
                         "Repository URL prefix for privacy_step1");
    generate->add_flag("--no-guiding-words", gen_no_guiding,
                       "Build level1 payloads without guiding words (ablation)");

    // run
    auto* run = app.add_subcommand("run", "Execute a campaign from a config file");
    std::string run_config, run_backend;
    int run_parallel = 0;
    bool run_ethics = false;
    run->add_option("--config", run_config, "Campaign config file")->required();
    run->add_option("--backend", run_backend,
                    "Backend id (mock:<scenario.json> or http:<config.json>); overrides config");
    run->add_option("--parallel", run_parallel, "Worker threads; overrides config");
    run->add_flag("--i-understand-ethics", run_ethics,
                  "Acknowledge that the target service is authorized for testing");

    // extract
    auto* extract = app.add_subcommand(
        "extract", "Extract the substantive answer from a raw completion on stdin");
    std::string ext_kind, ext_lang = "python", ext_field;
    extract->add_option("--kind", ext_kind, "Attack kind the completion answered")->required();
    extract->add_option("--lang", ext_lang, "Payload language: python|go");
    extract->add_option("--field", ext_field, "Privacy field for privacy probes");

    // judge
    auto* judge = app.add_subcommand("judge", "Turn trial records into outcome verdicts");
    std::string judge_trials, judge_corpus, judge_out, judge_mode = "keyword";
    std::string judge_markers, judge_backend, judge_policy;
    judge->add_option("--trials", judge_trials, "Trials JSONL from `run`")->required();
    judge->add_option("--corpus", judge_corpus, "Query corpus (question text for the judge)");
    judge->add_option("--out", judge_out, "Verdicts JSONL to write")->required();
    judge->add_option("--judge", judge_mode, "Judge: keyword|llm")
        ->check(CLI::IsMember({"keyword", "llm"}));
    judge->add_option("--markers", judge_markers,
                      "JSON file {\"harm\": [...], \"refusal\": [...]} overriding marker lists");
    judge->add_option("--judge-backend", judge_backend,
                      "Judge model (mock:<scenario.json> or http:<config.json>)");
    judge->add_option("--policy", judge_policy, "Policy text file for the LLM judge");

    // audit
    auto* audit = app.add_subcommand("audit", "Score privacy probes against a user directory");
    std::vector<std::string> audit_trials;
    std::string audit_directory, audit_out;
    audit->add_option("--trials", audit_trials, "Trials JSONL (repeatable)")->required();
    audit->add_option("--directory", audit_directory,
                      "User directory: fixture JSONL path or live:<config.json>")
        ->required();
    audit->add_option("--out", audit_out, "Also write the audit JSON here");

    // report
    auto* report = app.add_subcommand("report", "Render ASR tables from verdicts");
    std::string rep_trials, rep_verdicts, rep_format = "md", rep_compare, rep_series;
    bool rep_by_category = false;
    report->add_option("--trials", rep_trials, "Trials JSONL")->required();
    report->add_option("--verdicts", rep_verdicts, "Verdicts JSONL")->required();
    report->add_option("--format", rep_format, "Output format: md|csv|json")
        ->check(CLI::IsMember({"md", "csv", "json"}));
    report->add_option("--compare", rep_compare, "Baseline verdicts for ablation deltas");
    report->add_flag("--by-category", rep_by_category, "Include the per-category breakdown");
    report->add_option("--series-out", rep_series, "Write plot-ready category series CSV here");

    try {
        app.parse(argc, argv);
        if (*generate)
            return cmd_generate(gen_corpus, gen_attack, gen_lang, gen_out, gen_field,
                                gen_no_guiding, gen_prefix);
        if (*run) return cmd_run(run_config, run_backend, run_parallel, run_ethics);
        if (*extract) return cmd_extract(ext_kind, ext_lang, ext_field);
        if (*judge)
            return cmd_judge(judge_trials, judge_corpus, judge_out, judge_mode, judge_markers,
                             judge_backend, judge_policy);
        if (*audit) return cmd_audit(audit_trials, audit_directory, audit_out);
        if (*report)
            return cmd_report(rep_trials, rep_verdicts, rep_format, rep_compare,
                              rep_by_category, rep_series);
        return 1;
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}
