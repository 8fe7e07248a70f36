#include "nowcast/io.hpp"

#include <fstream>

#include "nowcast/csv.hpp"

namespace nowcast::io {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write '" + path + "'");
    return out;
}

} // namespace

void write_timeseries_csv(const std::string& path, const TimeSeries& s) {
    s.validate();
    auto out = open_out(path);
    out << "day,value\n";
    for (std::size_t i = 0; i < s.size(); ++i)
        out << s.day(i) << ',' << csv::fmt(s[i]) << '\n';
}

TimeSeries read_timeseries_csv(const std::string& path) {
    const auto rows = csv::read_rows(path, "day,value");
    if (rows.empty()) throw FormatError(path + ": no data rows");
    TimeSeries s;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const long long day = csv::to_int(rows[i][0], "day");
        if (i == 0)
            s.start_day = static_cast<int>(day);
        else if (day != s.start_day + static_cast<long long>(i))
            throw FormatError(path + ": days must be consecutive and increasing");
        s.values.push_back(csv::to_double(rows[i][1], "value"));
    }
    s.validate();
    return s;
}

void write_trajectory_csv(const std::string& path, const EpidemicTrajectory& t) {
    auto out = open_out(path);
    out << "day,s,i,r,incidence,r0\n";
    for (std::size_t k = 0; k < t.s.size(); ++k)
        out << t.s.day(k) << ',' << csv::fmt(t.s[k]) << ',' << csv::fmt(t.i[k]) << ','
            << csv::fmt(t.r[k]) << ',' << csv::fmt(t.incidence[k]) << ','
            << csv::fmt(t.r0[k]) << '\n';
}

EpidemicTrajectory read_trajectory_csv(const std::string& path) {
    const auto rows = csv::read_rows(path, "day,s,i,r,incidence,r0");
    if (rows.empty()) throw FormatError(path + ": no data rows");
    EpidemicTrajectory t;
    int start = 0;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const long long day = csv::to_int(rows[k][0], "day");
        if (k == 0)
            start = static_cast<int>(day);
        else if (day != start + static_cast<long long>(k))
            throw FormatError(path + ": days must be consecutive and increasing");
        t.s.values.push_back(csv::to_double(rows[k][1], "s"));
        t.i.values.push_back(csv::to_double(rows[k][2], "i"));
        t.r.values.push_back(csv::to_double(rows[k][3], "r"));
        t.incidence.values.push_back(csv::to_double(rows[k][4], "incidence"));
        t.r0.values.push_back(csv::to_double(rows[k][5], "r0"));
    }
    t.s.start_day = t.i.start_day = t.r.start_day = t.incidence.start_day =
        t.r0.start_day = start;
    return t;
}

void write_responses_csv(const std::string& path,
                         const std::vector<ResponseBatch>& batches) {
    auto out = open_out(path);
    out << "day,respondent,indirect_count,degree,direct_flag\n";
    for (const auto& b : batches) {
        for (std::size_t i = 0; i < b.size(); ++i) {
            out << b.day << ',' << i << ',' << csv::fmt(b.indirect_counts[i]) << ',';
            if (b.has_degrees()) out << b.degrees[i];
            out << ',' << static_cast<int>(b.direct_flags[i]) << '\n';
        }
    }
}

std::vector<ResponseBatch> read_responses_csv(const std::string& path) {
    const auto rows = csv::read_rows(path, "day,respondent,indirect_count,degree,direct_flag");
    if (rows.empty()) throw FormatError(path + ": no data rows");
    std::vector<ResponseBatch> batches;
    const bool degrees_present = !rows[0][3].empty();  // all rows or none
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const int day = static_cast<int>(csv::to_int(rows[k][0], "day"));
        if (batches.empty() || batches.back().day != day) {
            if (!batches.empty() && day < batches.back().day)
                throw FormatError(path + ": days must be non-decreasing");
            batches.emplace_back();
            batches.back().day = day;
        }
        ResponseBatch& b = batches.back();
        b.indirect_counts.push_back(csv::to_double(rows[k][2], "indirect_count"));
        if (rows[k][3].empty() == degrees_present)
            throw FormatError(path + ": degree column must be filled for all rows or none");
        if (degrees_present)
            b.degrees.push_back(static_cast<int>(csv::to_int(rows[k][3], "degree")));
        b.direct_flags.push_back(
            csv::to_int(rows[k][4], "direct_flag") != 0 ? 1 : 0);
    }
    for (auto& b : batches) b.validate();
    return batches;
}

void write_estimates_csv(const std::string& path, const EstimateSeries& e) {
    e.validate();
    auto out = open_out(path);
    out << "bin,value,n,method,smoothing,accum,w\n";
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (!e.defined(i)) continue;
        out << e.values.day(i) << ',' << csv::fmt(e.values[i]) << ',' << e.counts[i]
            << ',' << to_string(e.method) << ',' << to_string(e.smoothing) << ','
            << e.accum << ',' << e.w << '\n';
    }
}

EstimateSeries read_estimates_csv(const std::string& path) {
    const auto rows = csv::read_rows(path, "bin,value,n,method,smoothing,accum,w");
    if (rows.empty()) throw FormatError(path + ": no data rows");

    std::vector<long long> bins;
    std::vector<double> values;
    std::vector<long long> counts;
    for (const auto& r : rows) {
        bins.push_back(csv::to_int(r[0], "bin"));
        if (bins.size() > 1 && bins.back() <= bins[bins.size() - 2])
            throw FormatError(path + ": bins must be strictly increasing");
        values.push_back(csv::to_double(r[1], "value"));
        counts.push_back(csv::to_int(r[2], "n"));
    }

    EstimateSeries e;
    e.method = method_from_string(rows[0][3]);
    e.smoothing = smoothing_from_string(rows[0][4]);
    e.accum = static_cast<int>(csv::to_int(rows[0][5], "accum"));
    e.w = static_cast<int>(csv::to_int(rows[0][6], "w"));
    const long long first = bins.front();
    const long long last = bins.back();
    const std::size_t len = static_cast<std::size_t>(last - first + 1);
    e.values = TimeSeries{static_cast<int>(first), std::vector<double>(len, 0.0)};
    e.counts.assign(len, 0);
    for (std::size_t k = 0; k < bins.size(); ++k) {
        const std::size_t i = static_cast<std::size_t>(bins[k] - first);
        e.values[i] = values[k];
        e.counts[i] = counts[k];
    }
    e.validate();
    return e;
}

} // namespace nowcast::io
