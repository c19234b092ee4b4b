#pragma once

#include <string>

#include "sketchdepth/errors.hpp"
#include "sketchdepth/image.hpp"

namespace sketchdepth {

// Global near/far planes. The same constants apply to every shape so that
// disparity values are comparable across the whole corpus.
struct DisparityConfig {
    double z_near = 0.5;
    double z_far = 2.5;

    void validate() const {
        if (!(0.0 < z_near && z_near < z_far))
            throw ConfigError("disparity config requires 0 < z_near < z_far");
    }
};

inline bool operator==(const DisparityConfig& a, const DisparityConfig& b) {
    return a.z_near == b.z_near && a.z_far == b.z_far;
}

enum class DepthSpace { MetricDepth, NormalizedDisparity };

struct DepthImage {
    Grid<double> values;
    MaskImage validity;
    DisparityConfig config;
    DepthSpace space = DepthSpace::NormalizedDisparity;

    int width() const { return values.width; }
    int height() const { return values.height; }

    static DepthImage make(int w, int h, DisparityConfig cfg, DepthSpace space) {
        DepthImage img;
        img.values = Grid<double>(w, h, 0.0);
        img.validity = MaskImage(w, h, 0);
        img.config = cfg;
        img.space = space;
        return img;
    }
};

// y = (1/Z - 1/Z_far) / (1/Z_near - 1/Z_far); maps Z_near -> 1, Z_far -> 0.
inline double depth_to_disparity_value(double z, const DisparityConfig& cfg) {
    return (1.0 / z - 1.0 / cfg.z_far) / (1.0 / cfg.z_near - 1.0 / cfg.z_far);
}

inline double disparity_to_depth_value(double y, const DisparityConfig& cfg) {
    return 1.0 / (y * (1.0 / cfg.z_near - 1.0 / cfg.z_far) + 1.0 / cfg.z_far);
}

inline DepthImage depth_to_disparity(const DepthImage& z, const DisparityConfig& cfg) {
    cfg.validate();
    if (z.space != DepthSpace::MetricDepth)
        throw RangeError("depth_to_disparity expects a MetricDepth image");
    DepthImage out = DepthImage::make(z.width(), z.height(), cfg, DepthSpace::NormalizedDisparity);
    for (int y = 0; y < z.height(); ++y) {
        for (int x = 0; x < z.width(); ++x) {
            if (!z.validity(x, y)) continue;
            const double d = z.values(x, y);
            if (d < cfg.z_near || d > cfg.z_far)
                throw RangeError("depth outside [z_near, z_far] at pixel (" +
                                 std::to_string(x) + ", " + std::to_string(y) + ")");
            out.values(x, y) = depth_to_disparity_value(d, cfg);
            out.validity(x, y) = 1;
        }
    }
    return out;
}

inline DepthImage disparity_to_depth(const DepthImage& img, const DisparityConfig& cfg) {
    cfg.validate();
    if (img.space != DepthSpace::NormalizedDisparity)
        throw RangeError("disparity_to_depth expects a NormalizedDisparity image");
    DepthImage out = DepthImage::make(img.width(), img.height(), cfg, DepthSpace::MetricDepth);
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            if (!img.validity(x, y)) continue;
            const double v = img.values(x, y);
            if (v < 0.0 || v > 1.0)
                throw RangeError("disparity outside [0, 1] at pixel (" + std::to_string(x) +
                                 ", " + std::to_string(y) + ")");
            out.values(x, y) = disparity_to_depth_value(v, cfg);
            out.validity(x, y) = 1;
        }
    }
    return out;
}

}  // namespace sketchdepth
