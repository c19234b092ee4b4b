#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "sketchdepth/camera.hpp"
#include "sketchdepth/depth.hpp"
#include "sketchdepth/errors.hpp"
#include "sketchdepth/image.hpp"
#include "sketchdepth/wireframe.hpp"

namespace sketchdepth {

struct CoverHit {
    int edge = 0;
    double depth = 0.0;  // camera units
};

inline bool operator==(const CoverHit& a, const CoverHit& b) {
    return a.edge == b.edge && a.depth == b.depth;
}

// One aligned training pair: sketch mask, Z-buffered stroke depth, its
// normalized disparity, and the per-pixel (edge, depth) cover lists.
struct RenderBundle {
    int width = 0;
    int height = 0;
    MaskImage mask;
    Grid<double> depth;      // valid only where mask=1
    Grid<double> disparity;  // valid only where mask=1
    std::vector<std::vector<CoverHit>> cover;
    OrthoCamera camera;
    DisparityConfig config;
    double stroke_radius = 1.5;
    std::string shape_id;
    int view_id = 0;
    uint64_t seed = 0;
};

// Strokes use a round pen of fixed pixel radius. A pixel is covered by an
// edge when its center lies within the radius of the projected polyline;
// the depth written is that of the 2D-nearest polyline point, and the
// Z-buffer keeps the minimum depth across edges.
inline RenderBundle rasterize(const WireframeGraph& g, const OrthoCamera& cam,
                              double stroke_radius, DisparityConfig cfg = {}) {
    cam.validate();
    cfg.validate();
    if (!(stroke_radius >= 0.5)) throw RangeError("stroke radius must be >= 0.5 px");

    const int W = cam.width, H = cam.height;
    RenderBundle bundle;
    bundle.width = W;
    bundle.height = H;
    bundle.mask = MaskImage(W, H, 0);
    bundle.depth = Grid<double>(W, H, 0.0);
    bundle.disparity = Grid<double>(W, H, 0.0);
    bundle.cover.resize(size_t(W) * H);
    bundle.camera = cam;
    bundle.config = cfg;
    bundle.stroke_radius = stroke_radius;

    const double r2 = stroke_radius * stroke_radius;
    constexpr double kInf = std::numeric_limits<double>::infinity();

    // per-edge scratch: closest squared distance and its depth, per pixel
    std::vector<double> best_d2(size_t(W) * H, kInf);
    std::vector<double> best_depth(size_t(W) * H, 0.0);
    std::vector<size_t> touched;

    for (const auto& e : g.edges) {
        touched.clear();
        for (size_t s = 0; s + 1 < e.samples.size(); ++s) {
            const Vec3 pa = cam.project(e.samples[s]);
            const Vec3 pb = cam.project(e.samples[s + 1]);
            const Vec2 a = cam.plane_to_pixel(pa.x, pa.y);
            const Vec2 b = cam.plane_to_pixel(pb.x, pb.y);
            const double da = pa.z, db = pb.z;

            int x0 = int(std::floor(std::min(a.x, b.x) - stroke_radius));
            int x1 = int(std::ceil(std::max(a.x, b.x) + stroke_radius));
            int y0 = int(std::floor(std::min(a.y, b.y) - stroke_radius));
            int y1 = int(std::ceil(std::max(a.y, b.y) + stroke_radius));
            x0 = std::max(x0, 0);
            y0 = std::max(y0, 0);
            x1 = std::min(x1, W - 1);
            y1 = std::min(y1, H - 1);

            const double dx = b.x - a.x, dy = b.y - a.y;
            const double len2 = dx * dx + dy * dy;
            for (int py = y0; py <= y1; ++py) {
                for (int px = x0; px <= x1; ++px) {
                    double t = 0.0;
                    if (len2 > 0.0)
                        t = std::clamp(((px - a.x) * dx + (py - a.y) * dy) / len2, 0.0, 1.0);
                    const double cx = a.x + t * dx;
                    const double cy = a.y + t * dy;
                    const double d2 = (px - cx) * (px - cx) + (py - cy) * (py - cy);
                    if (d2 > r2) continue;
                    const size_t idx = size_t(py) * W + px;
                    if (best_d2[idx] == kInf) touched.push_back(idx);
                    if (d2 < best_d2[idx]) {
                        best_d2[idx] = d2;
                        best_depth[idx] = da + t * (db - da);
                    }
                }
            }
        }
        for (size_t idx : touched) {
            bundle.cover[idx].push_back({e.id, best_depth[idx]});
            if (!bundle.mask.v[idx] || best_depth[idx] < bundle.depth.v[idx]) {
                bundle.depth.v[idx] = best_depth[idx];
                bundle.mask.v[idx] = 1;
            }
            best_d2[idx] = kInf;
        }
    }

    bool any = false;
    for (size_t i = 0; i < bundle.mask.size(); ++i) {
        if (!bundle.mask.v[i]) continue;
        any = true;
        const double z = bundle.depth.v[i];
        if (z < cfg.z_near || z > cfg.z_far)
            throw RangeError("rendered depth " + std::to_string(z) +
                             " escapes the disparity band [" + std::to_string(cfg.z_near) +
                             ", " + std::to_string(cfg.z_far) + "]");
        bundle.disparity.v[i] = depth_to_disparity_value(z, cfg);
    }
    if (!any) throw RenderError("empty render: no geometry inside the camera window");

    return bundle;
}

inline DepthImage bundle_disparity_image(const RenderBundle& b) {
    DepthImage img =
        DepthImage::make(b.width, b.height, b.config, DepthSpace::NormalizedDisparity);
    img.values = b.disparity;
    img.validity = b.mask;
    return img;
}

inline DepthImage bundle_depth_image(const RenderBundle& b) {
    DepthImage img = DepthImage::make(b.width, b.height, b.config, DepthSpace::MetricDepth);
    img.values = b.depth;
    img.validity = b.mask;
    return img;
}

}  // namespace sketchdepth
