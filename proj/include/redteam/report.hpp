#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "redteam/evaluate.hpp"

namespace redteam {

// Round-half-away-from-zero to one decimal place: 0.994 -> "99.4%".
inline std::string render_percent(double fraction) {
    long tenths = std::lround(fraction * 1000.0);
    std::ostringstream out;
    if (tenths < 0) {
        out << '-';
        tenths = -tenths;
    }
    out << tenths / 10 << '.' << tenths % 10 << '%';
    return out.str();
}

// Signed percentage-point delta: -91.9 -> "(-91.9%)"; a delta that rounds
// to zero always carries a plus sign.
inline std::string render_signed_pp(double percentage_points) {
    long tenths = std::lround(percentage_points * 10.0);
    std::ostringstream out;
    out << '(' << (tenths < 0 ? '-' : '+');
    tenths = std::labs(tenths);
    out << tenths / 10 << '.' << tenths % 10 << "%)";
    return out.str();
}

// Difference between two runs of the same campaign scope (backend and
// category must agree; the attack kind is what varies between baseline and
// ablated variant). Returned in percentage points, computed from the
// unrounded means.
inline double ablation_delta(const AsrResult& baseline, const AsrResult& variant) {
    if (baseline.scope.backend_id != variant.scope.backend_id)
        throw std::invalid_argument("ablation_delta: backend mismatch: \"" +
                                    baseline.scope.backend_id + "\" vs \"" +
                                    variant.scope.backend_id + "\"");
    if (baseline.scope.category != variant.scope.category)
        throw std::invalid_argument("ablation_delta: category scope mismatch");
    return (variant.mean_asr - baseline.mean_asr) * 100.0;
}

inline std::string render_ablation(const AsrResult& baseline, const AsrResult& variant) {
    return render_signed_pp(ablation_delta(baseline, variant));
}

// ---------------------------------------------------------------------------
// ASR table: one row per attack kind, one column per backend.
// ---------------------------------------------------------------------------

struct AsrTable {
    struct Row {
        AttackKind kind;
        std::vector<std::optional<double>> cells;  // parallel to columns
    };
    std::vector<std::string> columns;  // backend ids, first-appearance order
    std::vector<Row> rows;             // attack kinds in declaration order
};

inline AsrTable build_asr_table(const std::vector<AsrResult>& results) {
    AsrTable table;
    std::map<std::pair<AttackKind, std::string>, double> cells;
    for (const AsrResult& r : results) {
        auto key = std::make_pair(r.scope.attack_kind, r.scope.backend_id);
        if (cells.count(key))
            throw std::invalid_argument("build_asr_table: duplicate result for " +
                                        attack_kind_key(r.scope.attack_kind) + " on \"" +
                                        r.scope.backend_id + "\"");
        cells[key] = r.mean_asr;
        if (std::find(table.columns.begin(), table.columns.end(), r.scope.backend_id) ==
            table.columns.end())
            table.columns.push_back(r.scope.backend_id);
    }
    for (AttackKind kind : kAllAttackKinds) {
        AsrTable::Row row{kind, {}};
        bool any = false;
        for (const std::string& backend : table.columns) {
            auto it = cells.find({kind, backend});
            if (it == cells.end()) {
                row.cells.emplace_back();
            } else {
                row.cells.emplace_back(it->second);
                any = true;
            }
        }
        if (any) table.rows.push_back(std::move(row));
    }
    return table;
}

namespace detail {

// Row maxima get bolded, ties included; a lone cell needs no emphasis.
inline std::vector<bool> row_bold_mask(const std::vector<std::optional<double>>& cells) {
    std::vector<bool> mask(cells.size(), false);
    size_t present = 0;
    double best = 0.0;
    for (const auto& c : cells) {
        if (!c) continue;
        if (present == 0 || *c > best) best = *c;
        ++present;
    }
    if (present < 2) return mask;
    for (size_t i = 0; i < cells.size(); ++i)
        if (cells[i] && *cells[i] == best) mask[i] = true;
    return mask;
}

}  // namespace detail

inline std::string asr_table_markdown(const AsrTable& table) {
    std::ostringstream out;
    out << "| attack |";
    for (const std::string& backend : table.columns) out << ' ' << backend << " |";
    out << "\n| --- |";
    for (size_t i = 0; i < table.columns.size(); ++i) out << " --- |";
    out << '\n';
    for (const AsrTable::Row& row : table.rows) {
        std::vector<bool> bold = detail::row_bold_mask(row.cells);
        out << "| " << attack_kind_display(row.kind) << " |";
        for (size_t i = 0; i < row.cells.size(); ++i) {
            out << ' ';
            if (!row.cells[i]) {
                out << '-';
            } else if (bold[i]) {
                out << "**" << render_percent(*row.cells[i]) << "**";
            } else {
                out << render_percent(*row.cells[i]);
            }
            out << " |";
        }
        out << '\n';
    }
    return out.str();
}

inline std::string asr_table_csv(const AsrTable& table) {
    std::ostringstream out;
    out << "attack";
    for (const std::string& backend : table.columns) out << ',' << backend;
    out << '\n';
    for (const AsrTable::Row& row : table.rows) {
        out << attack_kind_key(row.kind);
        for (const auto& cell : row.cells)
            out << ',' << (cell ? render_percent(*cell) : std::string("-"));
        out << '\n';
    }
    return out.str();
}

inline json asr_table_json(const AsrTable& table) {
    json rows = json::array();
    for (const AsrTable::Row& row : table.rows) {
        json cells = json::object();
        json values = json::object();
        for (size_t i = 0; i < table.columns.size(); ++i) {
            const std::string& backend = table.columns[i];
            if (row.cells[i]) {
                cells[backend] = render_percent(*row.cells[i]);
                values[backend] = *row.cells[i];
            } else {
                cells[backend] = "-";
                values[backend] = nullptr;
            }
        }
        rows.push_back(json{{"attack", attack_kind_key(row.kind)},
                            {"display", attack_kind_display(row.kind)},
                            {"cells", cells},
                            {"values", values}});
    }
    return json{{"columns", table.columns}, {"rows", rows}};
}

// ---------------------------------------------------------------------------
// Per-category breakdown: one mean ASR per (category, backend), any attack
// kind. A query counts as harmful at trial t if any verdict at t says so.
// ---------------------------------------------------------------------------

struct CategoryBreakdown {
    struct Row {
        QueryCategory category;
        std::vector<std::optional<double>> cells;  // parallel to columns
    };
    std::vector<std::string> columns;    // backend ids, first-appearance order
    std::vector<Row> rows;               // categories in declaration order
    std::vector<std::string> warnings;   // categories dropped for lack of verdicts
};

inline CategoryBreakdown category_breakdown(const std::vector<Verdict>& verdicts,
                                            const Corpus& corpus) {
    CategoryBreakdown breakdown;
    std::map<std::string, QueryCategory> category_of;
    std::map<QueryCategory, size_t> population;
    for (const Query& query : corpus.queries) {
        category_of[query.id] = query.category;
        ++population[query.category];
    }
    for (const Verdict& v : verdicts) {
        if (!category_of.count(v.query_id))
            throw std::invalid_argument("category_breakdown: verdict references unknown query \"" +
                                        v.query_id + "\"");
        if (std::find(breakdown.columns.begin(), breakdown.columns.end(), v.backend_id) ==
            breakdown.columns.end())
            breakdown.columns.push_back(v.backend_id);
    }

    for (QueryCategory category : kAllCategories) {
        if (!population.count(category)) continue;
        CategoryBreakdown::Row row{category, {}};
        bool any = false;
        for (const std::string& backend : breakdown.columns) {
            std::set<int> trials;
            std::map<int, std::set<std::string>> harmful_at;
            for (const Verdict& v : verdicts) {
                if (v.backend_id != backend) continue;
                if (category_of.at(v.query_id) != category) continue;
                trials.insert(v.trial_index);
                if (v.outcome == Outcome::Harmful) harmful_at[v.trial_index].insert(v.query_id);
            }
            if (trials.empty()) {
                row.cells.emplace_back();
                continue;
            }
            size_t harmful_total = 0;
            for (const auto& [trial, ids] : harmful_at) harmful_total += ids.size();
            double denom = static_cast<double>(population.at(category)) *
                           static_cast<double>(trials.size());
            row.cells.emplace_back(static_cast<double>(harmful_total) / denom);
            any = true;
        }
        if (any) {
            breakdown.rows.push_back(std::move(row));
        } else {
            breakdown.warnings.push_back("category \"" + category_key(category) +
                                         "\" has no verdicts; row omitted");
        }
    }
    return breakdown;
}

inline std::string breakdown_csv(const CategoryBreakdown& breakdown) {
    std::ostringstream out;
    out << "category";
    for (const std::string& backend : breakdown.columns) out << ',' << backend;
    out << '\n';
    for (const CategoryBreakdown::Row& row : breakdown.rows) {
        out << category_key(row.category);
        for (const auto& cell : row.cells)
            out << ',' << (cell ? render_percent(*cell) : std::string("-"));
        out << '\n';
    }
    return out.str();
}

inline json breakdown_json(const CategoryBreakdown& breakdown) {
    json rows = json::array();
    for (const CategoryBreakdown::Row& row : breakdown.rows) {
        json cells = json::object();
        json values = json::object();
        for (size_t i = 0; i < breakdown.columns.size(); ++i) {
            const std::string& backend = breakdown.columns[i];
            if (row.cells[i]) {
                cells[backend] = render_percent(*row.cells[i]);
                values[backend] = *row.cells[i];
            } else {
                cells[backend] = "-";
                values[backend] = nullptr;
            }
        }
        rows.push_back(json{{"category", category_key(row.category)},
                            {"display", category_display_name(row.category)},
                            {"cells", cells},
                            {"values", values}});
    }
    return json{{"columns", breakdown.columns},
                {"rows", rows},
                {"warnings", breakdown.warnings}};
}

// Long-format series for external plotters: one (category, backend, asr)
// triple per line, raw fractions.
inline std::string breakdown_series_csv(const CategoryBreakdown& breakdown) {
    std::ostringstream out;
    out << "category,backend,asr\n";
    for (const CategoryBreakdown::Row& row : breakdown.rows) {
        for (size_t i = 0; i < breakdown.columns.size(); ++i) {
            if (!row.cells[i]) continue;
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.6f", *row.cells[i]);
            out << category_key(row.category) << ',' << breakdown.columns[i] << ',' << buf
                << '\n';
        }
    }
    return out.str();
}

}  // namespace redteam
