#include "nowcast/evaluate.hpp"

#include <algorithm>
#include <map>

namespace nowcast {

namespace {

// Reference value for block b (days [b*accum, (b+1)*accum)), defined only
// when the reference covers every day of the block.
std::optional<double> reference_block(const TimeSeries& ref, int accum, long long b) {
    const long long lo = b * accum;
    const long long hi = lo + accum - 1;
    if (lo < ref.start_day || hi > ref.last_day()) return std::nullopt;
    double sum = 0.0;
    for (long long d = lo; d <= hi; ++d)
        sum += ref[static_cast<std::size_t>(d - ref.start_day)];
    return sum / static_cast<double>(accum);
}

} // namespace

std::optional<double> mae_vs_reference(const EstimateSeries& e,
                                       const TimeSeries& reference) {
    e.validate();
    reference.validate();

    std::size_t last_defined = e.size();
    for (std::size_t i = e.size(); i-- > 0;) {
        if (e.defined(i)) {
            last_defined = i;
            break;
        }
    }

    std::vector<double> est, ref;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (!e.defined(i)) continue;
        if (e.last_bin_partial && i == last_defined) continue;
        const auto rv = reference_block(reference, e.accum, e.values.day(i));
        if (!rv) continue;
        est.push_back(e.values[i]);
        ref.push_back(*rv);
    }
    if (est.empty()) return std::nullopt;
    const TimeSeries a = range_normalize(TimeSeries{0, std::move(est)});
    const TimeSeries b = range_normalize(TimeSeries{0, std::move(ref)});
    return mae(a, b);
}

std::vector<MaeEntry> evaluate_estimates(const std::vector<EstimateSeries>& estimates,
                                         const TimeSeries& reference) {
    if (estimates.empty()) throw ShapeError("evaluate: no estimates given");
    std::vector<MaeEntry> table;
    table.reserve(estimates.size());
    for (const auto& e : estimates) {
        const auto value = mae_vs_reference(e, reference);
        if (!value)
            throw RangeError("evaluate: estimate (" + to_string(e.method) + "-" +
                             to_string(e.smoothing) +
                             ") shares no bins with the reference");
        MaeEntry row;
        row.method = e.method;
        row.smoothing = e.smoothing;
        row.accum = e.accum;
        row.w = e.w;
        row.mae = *value;
        table.push_back(row);
    }

    // Best and second-best per (accum, w) group.
    std::map<std::pair<int, int>, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < table.size(); ++i)
        groups[{table[i].accum, table[i].w}].push_back(i);
    for (auto& [key, idx] : groups) {
        std::vector<std::size_t> order = idx;
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return table[a].mae < table[b].mae;
        });
        if (!order.empty()) table[order[0]].mark = "best";
        if (order.size() > 1) table[order[1]].mark = "second";
    }
    return table;
}

} // namespace nowcast
