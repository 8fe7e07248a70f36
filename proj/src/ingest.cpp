#include "nowcast/ingest.hpp"

#include <algorithm>

#include "nowcast/csv.hpp"
#include "nowcast/dates.hpp"

namespace nowcast {

Question question_from_string(const std::string& s) {
    if (s == "household") return Question::Household;
    if (s == "community") return Question::Community;
    if (s == "direct") return Question::Direct;
    throw ConfigError("question: unknown value '" + s +
                      "' (expected household|community|direct)");
}

std::string to_string(Question q) {
    switch (q) {
        case Question::Household: return "household";
        case Question::Community: return "community";
        case Question::Direct: return "direct";
    }
    return "?";
}

long long FilterReport::removed(const std::string& rule) const {
    const auto it = removed_by_rule.find(rule);
    return it == removed_by_rule.end() ? 0 : it->second;
}

namespace {

bool negative(const std::optional<int>& v) { return v && *v < 0; }
bool over_100(const std::optional<int>& v) { return v && *v > 100; }

// First matching rule, or "" to keep the row.
std::string violated_rule(const RawSurveyRow& r, Question question) {
    if (negative(r.household_cli) || negative(r.household_size) ||
        negative(r.community_cli) || negative(r.symptom_days) ||
        negative(r.tested_positive) || negative(r.age_lt18) ||
        negative(r.age_18_64) || negative(r.age_ge65))
        return "negative";
    if (over_100(r.household_cli) || over_100(r.age_lt18) || over_100(r.age_18_64) ||
        over_100(r.age_ge65) || over_100(r.symptom_days))
        return "over_100";
    if (r.household_cli && *r.household_cli > 0 && r.symptom_days && *r.symptom_days == 0)
        return "inconsistent";
    if (r.household_cli && r.household_size && *r.household_cli > *r.household_size)
        return "inconsistent";

    const bool missing_direct = !r.tested_positive;
    switch (question) {
        case Question::Household:
            if (!r.household_cli || !r.household_size || missing_direct) return "missing";
            break;
        case Question::Community:
            if (!r.community_cli || missing_direct) return "missing";
            break;
        case Question::Direct:
            if (missing_direct) return "missing";
            break;
    }
    return "";
}

} // namespace

std::pair<std::vector<RawSurveyRow>, FilterReport> outlier_filter(
    const std::vector<RawSurveyRow>& rows, Question question) {
    FilterReport report;
    report.rows_in = static_cast<long long>(rows.size());
    std::vector<RawSurveyRow> kept;
    kept.reserve(rows.size());
    for (const auto& r : rows) {
        const std::string rule = violated_rule(r, question);
        if (rule.empty())
            kept.push_back(r);
        else
            ++report.removed_by_rule[rule];
    }
    report.rows_out = static_cast<long long>(kept.size());
    return {std::move(kept), std::move(report)};
}

std::vector<ResponseBatch> to_batches(const std::vector<RawSurveyRow>& rows,
                                      Question question) {
    if (rows.empty()) return {};
    std::vector<RawSurveyRow> sorted = rows;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const RawSurveyRow& a, const RawSurveyRow& b) {
                         return a.date_day < b.date_day;
                     });
    const long long first = sorted.front().date_day;

    auto value_of = [&](const RawSurveyRow& r) -> double {
        const std::optional<int>& field = question == Question::Household ? r.household_cli
                                          : question == Question::Community
                                              ? r.community_cli
                                              : r.tested_positive;
        if (!field)
            throw DomainError("to_batches: missing value; run outlier_filter first");
        return static_cast<double>(*field);
    };

    std::vector<ResponseBatch> batches;
    for (const auto& r : sorted) {
        const int day = static_cast<int>(r.date_day - first);
        if (batches.empty() || batches.back().day != day) {
            ResponseBatch b;
            b.day = day;
            batches.push_back(std::move(b));
        }
        ResponseBatch& b = batches.back();
        b.indirect_counts.push_back(value_of(r));
        if (question == Question::Household) {
            if (!r.household_size)
                throw DomainError("to_batches: missing household_size; run outlier_filter first");
            b.degrees.push_back(*r.household_size);
        }
        if (!r.tested_positive)
            throw DomainError("to_batches: missing tested_positive; run outlier_filter first");
        b.direct_flags.push_back(*r.tested_positive != 0 ? 1 : 0);
    }
    return batches;
}

TimeSeries load_reference(const std::string& path, ReferenceMode mode, int smooth_days) {
    if (smooth_days < 1 || smooth_days % 2 == 0)
        throw ConfigError("smooth_days: must be odd and >= 1");
    const auto rows = csv::read_rows(path, "date,cases");
    if (rows.size() < (mode == ReferenceMode::Cumulative ? 2u : 1u))
        throw FormatError(path + ": too few rows");

    std::vector<long long> days;
    std::vector<double> cases;
    days.reserve(rows.size());
    cases.reserve(rows.size());
    for (const auto& r : rows) {
        const long long day = parse_iso_date(r[0]);
        if (!days.empty()) {
            if (day <= days.back())
                throw FormatError(path + ": dates must be strictly increasing (" +
                                  r[0] + ")");
            if (day != days.back() + 1)
                throw FormatError(path + ": dates must be consecutive (gap before " +
                                  r[0] + ")");
        }
        days.push_back(day);
        cases.push_back(csv::to_double(r[1], "cases"));
    }

    std::vector<double> daily;
    long long start_day = days.front();
    if (mode == ReferenceMode::Cumulative) {
        daily.reserve(cases.size() - 1);
        for (std::size_t i = 1; i < cases.size(); ++i)
            daily.push_back(cases[i] - cases[i - 1]);
        start_day = days[1];
    } else {
        daily = cases;
    }
    for (double& v : daily) v = std::max(0.0, v);  // reporting corrections

    // Centred rolling mean, truncated at the edges.
    const int w = smooth_days / 2;
    std::vector<double> smooth(daily.size(), 0.0);
    const long long n = static_cast<long long>(daily.size());
    for (long long t = 0; t < n; ++t) {
        const long long lo = std::max<long long>(0, t - w);
        const long long hi = std::min<long long>(n - 1, t + w);
        double sum = 0.0;
        for (long long i = lo; i <= hi; ++i) sum += daily[static_cast<std::size_t>(i)];
        smooth[static_cast<std::size_t>(t)] = sum / static_cast<double>(hi - lo + 1);
    }
    return make_series(static_cast<int>(start_day), std::move(smooth));
}

std::vector<RawSurveyRow> read_survey_csv(const std::string& path) {
    static const std::string header =
        "date,household_cli,household_size,community_cli,symptom_days,"
        "tested_positive,age_lt18,age_18_64,age_ge65";
    const auto rows = csv::read_rows(path, header);
    std::vector<RawSurveyRow> out;
    out.reserve(rows.size());
    auto opt_int = [](const std::string& s, const char* what) -> std::optional<int> {
        if (s.empty()) return std::nullopt;
        return static_cast<int>(csv::to_int(s, what));
    };
    for (const auto& r : rows) {
        RawSurveyRow row;
        row.date_day = parse_iso_date(r[0]);
        row.household_cli = opt_int(r[1], "household_cli");
        row.household_size = opt_int(r[2], "household_size");
        row.community_cli = opt_int(r[3], "community_cli");
        row.symptom_days = opt_int(r[4], "symptom_days");
        row.tested_positive = opt_int(r[5], "tested_positive");
        row.age_lt18 = opt_int(r[6], "age_lt18");
        row.age_18_64 = opt_int(r[7], "age_18_64");
        row.age_ge65 = opt_int(r[8], "age_ge65");
        out.push_back(row);
    }
    return out;
}

} // namespace nowcast
