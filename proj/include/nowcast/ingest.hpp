#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nowcast/survey.hpp"
#include "nowcast/timeseries.hpp"

namespace nowcast {

/// One survey response as read from file, before any cleaning. Every field
/// except the date may be missing.
struct RawSurveyRow {
    long long date_day = 0;  // epoch day
    std::optional<int> household_cli;
    std::optional<int> household_size;
    std::optional<int> community_cli;
    std::optional<int> symptom_days;
    std::optional<int> tested_positive;
    std::optional<int> age_lt18;
    std::optional<int> age_18_64;
    std::optional<int> age_ge65;
};

/// Which survey question feeds the indirect counts.
enum class Question { Household, Community, Direct };
Question question_from_string(const std::string& s);
std::string to_string(Question q);

struct FilterReport {
    long long rows_in = 0;
    long long rows_out = 0;
    std::map<std::string, long long> removed_by_rule;

    long long removed(const std::string& rule) const;
};

/// Removes, in order and with first-match attribution:
///   "negative"     any present numeric field below 0
///   "over_100"     household CLI, any household age count, or symptom days
///                  above 100
///   "inconsistent" household CLI > 0 with zero symptom days, or household
///                  CLI exceeding the household size
///   "missing"      a field required by the requested question is absent
/// Never fails; the report reconciles exactly (rows_in == rows_out + removed).
std::pair<std::vector<RawSurveyRow>, FilterReport> outlier_filter(
    const std::vector<RawSurveyRow>& rows, Question question);

/// Groups filtered rows into date-sorted daily batches. Day indices count
/// from the first survey date (day 0). Degrees come from household_size for
/// the household question and are absent otherwise; direct flags come from
/// tested_positive.
std::vector<ResponseBatch> to_batches(const std::vector<RawSurveyRow>& rows,
                                      Question question);

enum class ReferenceMode { Cumulative, Daily };

/// Reads a `date,cases` file into a daily reference curve: cumulative input
/// is differenced, negative daily corrections are clamped to 0, and a
/// centred rolling mean (default 7 days, truncated at the edges) denoises
/// the result. start_day of the output is the epoch day of its first value.
/// FormatError on unsorted, duplicate, or non-consecutive dates.
TimeSeries load_reference(const std::string& path, ReferenceMode mode,
                          int smooth_days = 7);

/// Survey-row CSV (header below, missing values empty):
/// date,household_cli,household_size,community_cli,symptom_days,tested_positive,age_lt18,age_18_64,age_ge65
std::vector<RawSurveyRow> read_survey_csv(const std::string& path);

} // namespace nowcast
