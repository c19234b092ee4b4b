#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sketchdepth/errors.hpp"
#include "sketchdepth/geometry.hpp"
#include "sketchdepth/rng.hpp"
#include "sketchdepth/wireframe.hpp"

namespace sketchdepth {

// Orthographic camera. The eye sits at -distance * view from the model
// origin and looks along +view; depth of a point is its distance from the
// eye measured along the view axis.
struct OrthoCamera {
    Vec3 view{0, 0, 1};
    Vec3 up{0, 1, 0};
    double half_width = 1.05;  // zoom: model units spanned by half the image width
    Vec2 principal{0, 0};      // window center offset in camera-plane units
    int width = 256;
    int height = 256;
    double distance = 1.5;

    Vec3 right() const { return cross(up, view); }

    double half_height() const { return half_width * height / double(width); }
    double pixel_pitch() const { return 2.0 * half_width / width; }

    // camera-plane coordinates (a along right, b along up) + depth
    Vec3 project(Vec3 p) const {
        return {dot(p, right()) - principal.x, dot(p, up) - principal.y,
                dot(p, view) + distance};
    }

    // continuous pixel coordinates; pixel centers sit at integers
    Vec2 plane_to_pixel(double a, double b) const {
        const double pitch = pixel_pitch();
        return {(a + half_width) / pitch - 0.5, (half_height() - b) / pitch - 0.5};
    }

    Vec2 project_pixel(Vec3 p) const {
        Vec3 abd = project(p);
        return plane_to_pixel(abd.x, abd.y);
    }

    // inverse of project + plane_to_pixel for a given depth
    Vec3 unproject(double px, double py, double depth) const {
        const double pitch = pixel_pitch();
        const double a = (px + 0.5) * pitch - half_width + principal.x;
        const double b = half_height() - (py + 0.5) * pitch + principal.y;
        return a * right() + b * up + (depth - distance) * view;
    }

    void validate() const {
        if (std::abs(norm(view) - 1.0) > 1e-9 || std::abs(norm(up) - 1.0) > 1e-9)
            throw ValidationError("camera view/up must be unit vectors");
        if (std::abs(dot(view, up)) > 1e-9)
            throw ValidationError("camera view and up must be orthogonal");
        if (!(half_width > 0.0)) throw ValidationError("camera half-width must be positive");
        if (width < 16 || height < 16)
            throw ValidationError("camera image size must be at least 16x16");
    }
};

// Builds an orthonormal up vector for a view direction, biased to world +z.
inline Vec3 make_up_for_view(Vec3 view) {
    Vec3 ref{0, 0, 1};
    Vec3 u = ref - dot(ref, view) * view;
    if (norm2(u) < 1e-12) {
        ref = {1, 0, 0};
        u = ref - dot(ref, view) * view;
    }
    return normalized(u);
}

inline OrthoCamera camera_for_view(Vec3 view, const OrthoCamera& base = OrthoCamera{}) {
    OrthoCamera cam = base;
    cam.view = normalized(view);
    cam.up = make_up_for_view(cam.view);
    return cam;
}

// Uniform-solid-angle directions on the upper hemisphere (view.z >= 0):
// azimuth ~ U[0, 2pi), cos(elevation) ~ U[0, 1].
inline std::vector<OrthoCamera> sample_hemisphere_views(int n, uint64_t seed,
                                                        const OrthoCamera& base = OrthoCamera{}) {
    if (n < 1) throw RangeError("sample_hemisphere_views needs n >= 1");
    Rng rng(seed);
    std::vector<OrthoCamera> cams;
    cams.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double z = rng.uniform01();
        const double phi = rng.uniform(0.0, 2.0 * kPi);
        const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
        cams.push_back(camera_for_view({s * std::cos(phi), s * std::sin(phi), z}, base));
    }
    return cams;
}

// Four isometric benchmark viewpoints: azimuths 45/135/225/315 degrees at
// elevation atan(1/sqrt(2)), each perturbed by an independent random
// rotation of magnitude <= jitter_deg.
inline std::vector<OrthoCamera> isometric_benchmark_views(
    double jitter_deg, uint64_t seed, const OrthoCamera& base = OrthoCamera{}) {
    if (jitter_deg < 0.0) throw RangeError("jitter must be non-negative");
    Rng rng(seed);
    const double elev = std::atan(1.0 / std::sqrt(2.0));
    const double ce = std::cos(elev), se = std::sin(elev);
    std::vector<OrthoCamera> cams;
    cams.reserve(4);
    for (int i = 0; i < 4; ++i) {
        const double az = deg_to_rad(45.0 + 90.0 * i);
        Vec3 view{ce * std::cos(az), ce * std::sin(az), se};
        OrthoCamera cam = camera_for_view(view, base);
        if (jitter_deg > 0.0) {
            const Vec3 axis = rng.unit_vector();
            const double angle = deg_to_rad(rng.uniform(0.0, jitter_deg));
            cam.view = normalized(rotate_axis_angle(cam.view, axis, angle));
            Vec3 up = rotate_axis_angle(cam.up, axis, angle);
            // re-orthogonalize against accumulated rounding
            up = up - dot(up, cam.view) * cam.view;
            cam.up = normalized(up);
        }
        cams.push_back(cam);
    }
    return cams;
}

// Zoom-in augmentation: shrink the window by u ~ U[0.3, 0.7] and recenter
// the principal point on the projection of a randomly chosen edge sample,
// which keeps part of the wireframe in frame.
inline OrthoCamera zoom_augment(const OrthoCamera& cam, const WireframeGraph& g, uint64_t seed) {
    Rng rng(seed);
    const double u = rng.uniform(0.3, 0.7);

    size_t total = 0;
    for (const auto& e : g.edges) total += e.samples.size();
    if (total == 0) throw ValidationError("zoom_augment: graph has no edge samples");
    size_t pick = rng.uniform_int(total);
    Vec3 target{};
    for (const auto& e : g.edges) {
        if (pick < e.samples.size()) {
            target = e.samples[pick];
            break;
        }
        pick -= e.samples.size();
    }

    OrthoCamera out = cam;
    out.half_width = cam.half_width * u;
    out.principal = {dot(target, cam.right()), dot(target, cam.up)};
    return out;
}

inline nlohmann::json camera_to_json(const OrthoCamera& cam) {
    nlohmann::json j;
    j["view"] = {cam.view.x, cam.view.y, cam.view.z};
    j["up"] = {cam.up.x, cam.up.y, cam.up.z};
    j["half_width"] = cam.half_width;
    j["principal"] = {cam.principal.x, cam.principal.y};
    j["width"] = cam.width;
    j["height"] = cam.height;
    j["distance"] = cam.distance;
    return j;
}

inline OrthoCamera camera_from_json(const nlohmann::json& j) {
    try {
        OrthoCamera cam;
        cam.view = {j.at("view")[0], j.at("view")[1], j.at("view")[2]};
        cam.up = {j.at("up")[0], j.at("up")[1], j.at("up")[2]};
        cam.half_width = j.at("half_width");
        cam.principal = {j.at("principal")[0], j.at("principal")[1]};
        cam.width = j.at("width");
        cam.height = j.at("height");
        cam.distance = j.at("distance");
        cam.validate();
        return cam;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("bad camera record: ") + e.what());
    }
}

}  // namespace sketchdepth
