#include "nowcast/estimator.hpp"

#include <algorithm>

namespace nowcast {

std::string to_string(Method m) {
    switch (m) {
        case Method::Ind: return "Ind";
        case Method::Nsum: return "NSUM";
        case Method::Dir: return "Dir";
    }
    return "?";
}

std::string to_string(Smoothing s) {
    switch (s) {
        case Smoothing::NoS: return "NoS";
        case Smoothing::WA: return "WA";
        case Smoothing::UA: return "UA";
    }
    return "?";
}

Method method_from_string(const std::string& s) {
    if (s == "Ind" || s == "ind") return Method::Ind;
    if (s == "NSUM" || s == "nsum") return Method::Nsum;
    if (s == "Dir" || s == "dir") return Method::Dir;
    throw ConfigError("method: unknown value '" + s + "' (expected ind|nsum|dir)");
}

Smoothing smoothing_from_string(const std::string& s) {
    if (s == "NoS" || s == "nos") return Smoothing::NoS;
    if (s == "WA" || s == "wa") return Smoothing::WA;
    if (s == "UA" || s == "ua") return Smoothing::UA;
    throw ConfigError("smoothing: unknown value '" + s + "' (expected nos|wa|ua)");
}

void EstimateSeries::validate() const {
    values.validate();
    if (counts.size() != values.size())
        throw ShapeError("estimate series: counts misaligned with values");
    for (long long c : counts)
        if (c < 0) throw DomainError("estimate series: negative count");
}

std::vector<ResponseBatch> accumulate(const std::vector<ResponseBatch>& batches,
                                      int accum) {
    if (batches.empty()) throw ShapeError("accumulate: no batches");
    if (accum < 1) throw DomainError("accumulate: accum must be >= 1");
    int prev_day = -1;
    for (const auto& b : batches) {
        if (b.day < 0) throw ShapeError("accumulate: negative day index");
        if (b.day <= prev_day) throw ShapeError("accumulate: days must be strictly increasing");
        prev_day = b.day;
    }

    std::vector<ResponseBatch> out;
    for (const auto& b : batches) {
        const int block = b.day / accum;
        if (out.empty() || out.back().day != block) {
            ResponseBatch merged;
            merged.day = block;
            out.push_back(std::move(merged));
        }
        ResponseBatch& m = out.back();
        m.indirect_counts.insert(m.indirect_counts.end(), b.indirect_counts.begin(),
                                 b.indirect_counts.end());
        m.degrees.insert(m.degrees.end(), b.degrees.begin(), b.degrees.end());
        m.direct_flags.insert(m.direct_flags.end(), b.direct_flags.begin(),
                              b.direct_flags.end());
    }
    // The last block is partial when the data range ends mid-block.
    const int last_day = batches.back().day;
    out.back().partial = (last_day + 1) % accum != 0;
    return out;
}

namespace {

template <typename PerBatch>
EstimateSeries mean_series(const std::vector<ResponseBatch>& batches, Method method,
                           PerBatch&& value_of) {
    if (batches.empty()) throw ShapeError("estimator: no batches");
    int prev_day = batches.front().day - 1;
    for (const auto& b : batches) {
        b.validate();
        if (b.day <= prev_day) throw ShapeError("estimator: days must be strictly increasing");
        prev_day = b.day;
    }
    const int first = batches.front().day;
    const int last = batches.back().day;
    const std::size_t len = static_cast<std::size_t>(last - first + 1);

    EstimateSeries e;
    e.method = method;
    e.smoothing = Smoothing::NoS;
    e.values = TimeSeries{first, std::vector<double>(len, 0.0)};
    e.counts.assign(len, 0);
    for (const auto& b : batches) {
        const std::size_t i = static_cast<std::size_t>(b.day - first);
        e.values[i] = value_of(b);
        e.counts[i] = static_cast<long long>(b.size());
    }
    e.last_bin_partial = batches.back().partial;
    return e;
}

} // namespace

EstimateSeries indirect_mean(const std::vector<ResponseBatch>& batches) {
    return mean_series(batches, Method::Ind, [](const ResponseBatch& b) {
        double sum = 0.0;
        for (double c : b.indirect_counts) sum += c;
        return sum / static_cast<double>(b.size());
    });
}

EstimateSeries nsum_mean(const std::vector<ResponseBatch>& batches) {
    return mean_series(batches, Method::Nsum, [](const ResponseBatch& b) {
        if (!b.has_degrees())
            throw ShapeError("nsum_mean: degrees absent from responses");
        double sum = 0.0;
        for (std::size_t i = 0; i < b.size(); ++i) {
            if (b.degrees[i] <= 0) throw DomainError("nsum_mean: degree 0 encountered");
            sum += b.indirect_counts[i] / b.degrees[i];
        }
        return sum / static_cast<double>(b.size());
    });
}

EstimateSeries direct_mean(const std::vector<ResponseBatch>& batches) {
    return mean_series(batches, Method::Dir, [](const ResponseBatch& b) {
        double sum = 0.0;
        for (std::uint8_t fl : b.direct_flags) sum += fl;
        return sum / static_cast<double>(b.size());
    });
}

namespace {

// The mean is computed as anchor + sum(u_i * (v_i - anchor)) / sum(u_i) with
// the weights scaled by the window's smallest count. This keeps three
// identities exact in floating point: constant windows return the constant,
// equal counts make the weighted and unweighted paths the same float ops,
// and scaling the values by a power of two scales the output by it.
EstimateSeries moving_average(const EstimateSeries& e, int w, Smoothing tag,
                              bool weighted) {
    if (w < 0) throw DomainError("moving average: w must be >= 0");
    e.validate();
    EstimateSeries out = e;
    out.smoothing = tag;
    out.w = w;
    if (w == 0) return out;

    const long long n = static_cast<long long>(e.size());
    for (long long t = 0; t < n; ++t) {
        const long long lo = std::max<long long>(0, t - w);
        const long long hi = std::min<long long>(n - 1, t + w);

        long long count_sum = 0, min_count = 0;
        long long anchor = -1;
        for (long long i = lo; i <= hi; ++i) {
            const std::size_t u = static_cast<std::size_t>(i);
            if (!e.defined(u)) continue;
            if (anchor < 0) anchor = i;
            count_sum += e.counts[u];
            min_count = min_count == 0 ? e.counts[u] : std::min(min_count, e.counts[u]);
        }
        const std::size_t ut = static_cast<std::size_t>(t);
        if (anchor < 0) {
            out.values[ut] = 0.0;
            out.counts[ut] = 0;
            continue;
        }
        const double v0 = e.values[static_cast<std::size_t>(anchor)];
        double acc = 0.0, den = 0.0;
        for (long long i = lo; i <= hi; ++i) {
            const std::size_t u = static_cast<std::size_t>(i);
            if (!e.defined(u)) continue;
            const double weight =
                weighted ? static_cast<double>(e.counts[u]) / static_cast<double>(min_count)
                         : 1.0;
            acc += weight * (e.values[u] - v0);
            den += weight;
        }
        out.values[ut] = std::max(0.0, v0 + acc / den);  // shield against -eps roundoff
        out.counts[ut] = count_sum;
    }
    return out;
}

} // namespace

EstimateSeries weighted_ma(const EstimateSeries& e, int w) {
    return moving_average(e, w, Smoothing::WA, true);
}

EstimateSeries unweighted_ma(const EstimateSeries& e, int w) {
    return moving_average(e, w, Smoothing::UA, false);
}

double calibrate_mu_d(const EstimateSeries& e, double f_tau, int tau) {
    if (!(f_tau > 0.0)) throw DomainError("calibrate_mu_d: f_tau must be positive");
    e.validate();
    const int offset = tau - e.values.start_day;
    if (offset < 0 || static_cast<std::size_t>(offset) >= e.size())
        throw DomainError("calibrate_mu_d: tau outside the series");
    if (!e.defined(static_cast<std::size_t>(offset)))
        throw DomainError("calibrate_mu_d: no responses at tau");
    return e.values[static_cast<std::size_t>(offset)] / f_tau;
}

} // namespace nowcast
