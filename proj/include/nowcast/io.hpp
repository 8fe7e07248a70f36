#pragma once

#include <string>
#include <vector>

#include "nowcast/epidemic.hpp"
#include "nowcast/estimator.hpp"
#include "nowcast/survey.hpp"
#include "nowcast/timeseries.hpp"

// File formats. Headers are bit-exact; values are written with round-trip
// precision so downstream commands recompute identically.
namespace nowcast::io {

/// `day,value` with strictly increasing consecutive days.
void write_timeseries_csv(const std::string& path, const TimeSeries& s);
TimeSeries read_timeseries_csv(const std::string& path);

/// `day,s,i,r,incidence,r0`
void write_trajectory_csv(const std::string& path, const EpidemicTrajectory& t);
EpidemicTrajectory read_trajectory_csv(const std::string& path);

/// `day,respondent,indirect_count,degree,direct_flag`; one row per
/// respondent, degree field empty when degrees were not collected.
void write_responses_csv(const std::string& path,
                         const std::vector<ResponseBatch>& batches);
std::vector<ResponseBatch> read_responses_csv(const std::string& path);

/// `bin,value,n,method,smoothing,accum,w`; missing bins are not written.
void write_estimates_csv(const std::string& path, const EstimateSeries& e);
EstimateSeries read_estimates_csv(const std::string& path);

} // namespace nowcast::io
