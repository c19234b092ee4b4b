#pragma once

#include <limits>
#include <string>
#include <vector>

#include "sketchdepth/errors.hpp"
#include "sketchdepth/raster.hpp"
#include "sketchdepth/wireframe.hpp"

namespace sketchdepth {

struct ComplexityReport {
    std::string shape_id;
    int view_id = 0;
    double apr = 0.0;
    int curve_complexity = 0;
    long foreground_pixels = 0;
    long accidental_pixels = 0;
    int lines = 0;
    int curves = 0;
};

// Occlusion gap: two cover hits count as distinct depth layers when their
// normalized disparities differ by more than this. Roughly two pixels worth
// of depth slope at the default band.
constexpr double kDefaultOcclusionGap = 0.01;

// A foreground pixel is accidental when two strokes from distinct edges
// overlap there on distinct depth layers. Edges that share a vertex are
// exempt within one stroke radius of that vertex's projection, so
// legitimate corners do not count.
inline long accidental_pixel_count(const RenderBundle& bundle, const WireframeGraph& g,
                                   double occlusion_gap = kDefaultOcclusionGap) {
    std::vector<Vec2> vertex_px(g.vertices.size());
    for (size_t i = 0; i < g.vertices.size(); ++i)
        vertex_px[i] = bundle.camera.project_pixel(g.vertices[i].position);

    const double r = bundle.stroke_radius;
    const double r2 = r * r;

    auto pair_exempt = [&](int e1, int e2, double px, double py) {
        for (int va : g.edges[e1].endpoints) {
            for (int vb : g.edges[e2].endpoints) {
                if (va != vb) continue;
                const double dx = px - vertex_px[va].x;
                const double dy = py - vertex_px[va].y;
                if (dx * dx + dy * dy <= r2) return true;
            }
        }
        return false;
    };

    long accidental = 0;
    for (int py = 0; py < bundle.height; ++py) {
        for (int px = 0; px < bundle.width; ++px) {
            const auto& hits = bundle.cover[bundle.mask.index(px, py)];
            if (hits.size() < 2) continue;
            bool is_accidental = false;
            for (size_t i = 0; i < hits.size() && !is_accidental; ++i) {
                const double yi = depth_to_disparity_value(hits[i].depth, bundle.config);
                for (size_t j = i + 1; j < hits.size(); ++j) {
                    const double yj = depth_to_disparity_value(hits[j].depth, bundle.config);
                    if (std::abs(yi - yj) <= occlusion_gap) continue;
                    if (pair_exempt(hits[i].edge, hits[j].edge, px, py)) continue;
                    is_accidental = true;
                    break;
                }
            }
            accidental += is_accidental;
        }
    }
    return accidental;
}

inline double accidental_pixel_ratio(const RenderBundle& bundle, const WireframeGraph& g,
                                     double occlusion_gap = kDefaultOcclusionGap) {
    const long fg = count_nonzero(bundle.mask);
    if (fg == 0) return 0.0;
    return double(accidental_pixel_count(bundle, g, occlusion_gap)) / double(fg);
}

// Per-edge primitive cost: 1 per line, 3 per non-line.
inline int curve_complexity(const WireframeGraph& g) {
    int score = 0;
    for (const auto& e : g.edges) score += e.kind == EdgeKind::Line ? 1 : 3;
    return score;
}

inline ComplexityReport score_bundle(const RenderBundle& bundle, const WireframeGraph& g,
                                     double occlusion_gap = kDefaultOcclusionGap) {
    ComplexityReport rep;
    rep.shape_id = bundle.shape_id;
    rep.view_id = bundle.view_id;
    rep.foreground_pixels = count_nonzero(bundle.mask);
    rep.accidental_pixels = accidental_pixel_count(bundle, g, occlusion_gap);
    rep.apr = rep.foreground_pixels > 0
                  ? double(rep.accidental_pixels) / double(rep.foreground_pixels)
                  : 0.0;
    rep.curve_complexity = curve_complexity(g);
    for (const auto& e : g.edges)
        (e.kind == EdgeKind::Line ? rep.lines : rep.curves) += 1;
    return rep;
}

struct StratifiedBin {
    double lower = -std::numeric_limits<double>::infinity();
    double upper = std::numeric_limits<double>::infinity();
    long count = 0;
    double mean_apr = 0.0;
    double mean_complexity = 0.0;
};

// Bins reports by curve complexity; bounds are ascending bin edges and each
// bin is closed on its lower bound, open on its upper.
inline std::vector<StratifiedBin> stratify(const std::vector<ComplexityReport>& reports,
                                           const std::vector<double>& bounds) {
    if (reports.empty()) throw ConfigError("stratify needs at least one report");
    for (size_t i = 1; i < bounds.size(); ++i)
        if (!(bounds[i - 1] < bounds[i])) throw ConfigError("stratify bounds must be ascending");

    std::vector<StratifiedBin> bins(bounds.size() + 1);
    for (size_t i = 0; i < bins.size(); ++i) {
        if (i > 0) bins[i].lower = bounds[i - 1];
        if (i < bounds.size()) bins[i].upper = bounds[i];
    }
    for (const auto& r : reports) {
        size_t b = bounds.size();
        for (size_t i = 0; i < bounds.size(); ++i) {
            if (r.curve_complexity < bounds[i]) {
                b = i;
                break;
            }
        }
        bins[b].count += 1;
        bins[b].mean_apr += r.apr;
        bins[b].mean_complexity += r.curve_complexity;
    }
    for (auto& b : bins) {
        if (b.count > 0) {
            b.mean_apr /= double(b.count);
            b.mean_complexity /= double(b.count);
        }
    }
    return bins;
}

}  // namespace sketchdepth
