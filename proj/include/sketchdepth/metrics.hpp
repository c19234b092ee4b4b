#pragma once

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sketchdepth/depth.hpp"
#include "sketchdepth/errors.hpp"
#include "sketchdepth/image.hpp"

namespace sketchdepth {

constexpr double kNmaeEps = 1e-6;
// Ground-truth disparities below this are excluded from AbsRel: the ratio is
// unbounded as y -> 0 at the far plane.
constexpr double kAbsRelFloor = 1e-4;

namespace detail {

inline void check_aligned(const Grid<double>& pred, const Grid<double>& gt,
                          const MaskImage& valid) {
    if (!pred.same_shape(gt.width, gt.height) || !valid.same_shape(gt.width, gt.height))
        throw RangeError("metric inputs must share one shape");
}

}  // namespace detail

inline double mae(const Grid<double>& pred, const Grid<double>& gt, const MaskImage& valid) {
    detail::check_aligned(pred, gt, valid);
    double sum = 0.0;
    long n = 0;
    for (size_t i = 0; i < gt.size(); ++i) {
        if (!valid.v[i]) continue;
        sum += std::abs(gt.v[i] - pred.v[i]);
        ++n;
    }
    if (n == 0) throw RangeError("mae: zero valid pixels");
    return sum / double(n);
}

inline double nmae(const Grid<double>& pred, const Grid<double>& gt, const MaskImage& valid,
                   double eps = kNmaeEps) {
    detail::check_aligned(pred, gt, valid);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < gt.size(); ++i) {
        if (!valid.v[i]) continue;
        lo = std::min(lo, gt.v[i]);
        hi = std::max(hi, gt.v[i]);
    }
    return mae(pred, gt, valid) / (hi - lo + eps);
}

// Pixels with gt below kAbsRelFloor are dropped from the sum and N; the
// count of dropped pixels is reported through excluded_out when given.
inline double absrel(const Grid<double>& pred, const Grid<double>& gt, const MaskImage& valid,
                     long* excluded_out = nullptr) {
    detail::check_aligned(pred, gt, valid);
    double sum = 0.0;
    long n = 0, excluded = 0;
    for (size_t i = 0; i < gt.size(); ++i) {
        if (!valid.v[i]) continue;
        if (gt.v[i] < kAbsRelFloor) {
            ++excluded;
            continue;
        }
        sum += std::abs(gt.v[i] - pred.v[i]) / gt.v[i];
        ++n;
    }
    if (excluded_out) *excluded_out = excluded;
    if (n == 0) throw RangeError("absrel: zero valid pixels after the near-zero guard (" +
                                 std::to_string(excluded) + " excluded)");
    return sum / double(n);
}

// Fraction of valid pixels with max(pred/gt, gt/pred) strictly below the
// threshold.
inline double delta_accuracy(const Grid<double>& pred, const Grid<double>& gt,
                             const MaskImage& valid, double threshold = 1.25) {
    detail::check_aligned(pred, gt, valid);
    long n = 0, ok = 0;
    for (size_t i = 0; i < gt.size(); ++i) {
        if (!valid.v[i]) continue;
        if (!(gt.v[i] > 0.0) || !(pred.v[i] > 0.0))
            throw RangeError("delta_accuracy: nonpositive value at a valid pixel");
        const double ratio = std::max(pred.v[i] / gt.v[i], gt.v[i] / pred.v[i]);
        ok += (ratio < threshold);
        ++n;
    }
    if (n == 0) throw RangeError("delta_accuracy: zero valid pixels");
    return double(ok) / double(n);
}

struct MetricsReport {
    double mae = 0.0;
    double nmae = 0.0;
    double absrel = 0.0;
    double delta_125 = 0.0;
    long n_valid = 0;
    long absrel_excluded = 0;
};

inline MetricsReport evaluate_prediction(const Grid<double>& pred, const Grid<double>& gt,
                                         const MaskImage& valid) {
    MetricsReport r;
    r.mae = mae(pred, gt, valid);
    r.nmae = nmae(pred, gt, valid);
    r.absrel = absrel(pred, gt, valid, &r.absrel_excluded);
    r.delta_125 = delta_accuracy(pred, gt, valid);
    for (auto m : valid.v) r.n_valid += (m != 0);
    return r;
}

enum class AggregationMode { Average, Best };

struct MetricSummary {
    double mean = 0.0;
    double std_error = 0.0;
    double std_dev = 0.0;
};

struct AggregateReport {
    AggregationMode mode = AggregationMode::Average;
    int k = 0;
    std::vector<MetricsReport> per_sample;
    MetricSummary mae, nmae, absrel, delta_125;
};

namespace detail {

inline MetricSummary summarize(const std::vector<double>& xs) {
    MetricSummary s;
    const double n = double(xs.size());
    for (double x : xs) s.mean += x;
    s.mean /= n;
    if (xs.size() > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - s.mean) * (x - s.mean);
        s.std_dev = std::sqrt(ss / (n - 1.0));
        s.std_error = s.std_dev / std::sqrt(n);
    }
    return s;
}

}  // namespace detail

// Average mode: per sample, the mean of each metric over the K predictions.
// Best mode: per sample, the single prediction with minimal NMAE supplies
// all four metrics. Summaries are mean +/- standard error over samples.
inline AggregateReport aggregate(const std::vector<std::vector<MetricsReport>>& groups,
                                 AggregationMode mode) {
    if (groups.empty()) throw RangeError("aggregate: no samples");
    const size_t k = groups.front().size();
    if (k == 0) throw RangeError("aggregate: empty prediction group");
    for (const auto& g : groups)
        if (g.size() != k) throw RangeError("aggregate: ragged prediction groups");

    AggregateReport out;
    out.mode = mode;
    out.k = int(k);
    for (const auto& g : groups) {
        MetricsReport r;
        if (mode == AggregationMode::Average) {
            for (const auto& p : g) {
                r.mae += p.mae;
                r.nmae += p.nmae;
                r.absrel += p.absrel;
                r.delta_125 += p.delta_125;
                r.n_valid += p.n_valid;
                r.absrel_excluded += p.absrel_excluded;
            }
            r.mae /= double(k);
            r.nmae /= double(k);
            r.absrel /= double(k);
            r.delta_125 /= double(k);
            r.n_valid = long(double(r.n_valid) / double(k));
        } else {
            size_t best = 0;
            for (size_t i = 1; i < g.size(); ++i)
                if (g[i].nmae < g[best].nmae) best = i;
            r = g[best];
        }
        out.per_sample.push_back(r);
    }

    std::vector<double> col(out.per_sample.size());
    auto fill = [&](auto getter) {
        for (size_t i = 0; i < out.per_sample.size(); ++i) col[i] = getter(out.per_sample[i]);
        return detail::summarize(col);
    };
    out.mae = fill([](const MetricsReport& r) { return r.mae; });
    out.nmae = fill([](const MetricsReport& r) { return r.nmae; });
    out.absrel = fill([](const MetricsReport& r) { return r.absrel; });
    out.delta_125 = fill([](const MetricsReport& r) { return r.delta_125; });
    return out;
}

inline nlohmann::json metrics_to_json(const MetricsReport& r) {
    return {{"mae", r.mae},       {"nmae", r.nmae},
            {"absrel", r.absrel}, {"delta_125", r.delta_125},
            {"n_valid", r.n_valid}, {"absrel_excluded", r.absrel_excluded}};
}

inline nlohmann::json aggregate_to_json(const AggregateReport& a) {
    auto summary = [](const MetricSummary& s) {
        return nlohmann::json{
            {"mean", s.mean}, {"std_error", s.std_error}, {"std_dev", s.std_dev}};
    };
    return {{"mode", a.mode == AggregationMode::Average ? "average" : "best"},
            {"k", a.k},
            {"n_samples", a.per_sample.size()},
            {"mae", summary(a.mae)},
            {"nmae", summary(a.nmae)},
            {"absrel", summary(a.absrel)},
            {"delta_125", summary(a.delta_125)}};
}

// CSV with the NMAE / AbsRel / delta triple per aggregation mode.
inline void write_benchmark_csv(std::ostream& os, const std::string& label,
                                const AggregateReport& avg, const AggregateReport& best) {
    os << "label,avg_nmae,avg_nmae_se,avg_absrel,avg_absrel_se,avg_delta125,avg_delta125_se,"
          "best_nmae,best_nmae_se,best_absrel,best_absrel_se,best_delta125,best_delta125_se\n";
    os << label << ',' << avg.nmae.mean << ',' << avg.nmae.std_error << ',' << avg.absrel.mean
       << ',' << avg.absrel.std_error << ',' << avg.delta_125.mean << ','
       << avg.delta_125.std_error << ',' << best.nmae.mean << ',' << best.nmae.std_error << ','
       << best.absrel.mean << ',' << best.absrel.std_error << ',' << best.delta_125.mean << ','
       << best.delta_125.std_error << '\n';
}

}  // namespace sketchdepth
