#pragma once

#include <array>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sketchdepth/errors.hpp"
#include "sketchdepth/geometry.hpp"

namespace sketchdepth {

// Vertex coincidence / collinearity tolerance in model units: below raster
// resolution at 256^2, above float32 noise.
constexpr double kVertexTol = 1e-6;

enum class EdgeKind { Line, Curve };

struct Vertex {
    int id = 0;
    Vec3 position;
};

struct Edge {
    int id = 0;
    std::array<int, 2> endpoints{0, 0};
    EdgeKind kind = EdgeKind::Line;
    // Polyline discretization, >= 2 points; first/last coincide with the
    // endpoint vertices.
    std::vector<Vec3> samples;
};

struct BoundingSphere {
    Vec3 center;
    double radius = 0.0;
};

struct WireframeGraph {
    std::vector<Vertex> vertices;
    std::vector<Edge> edges;
    BoundingSphere bsphere;
};

enum class WireFormat { WireJson, ObjLines };

inline BoundingSphere compute_bounding_sphere(const WireframeGraph& g) {
    Aabb box;
    for (const auto& v : g.vertices) box.expand(v.position);
    for (const auto& e : g.edges)
        for (const auto& s : e.samples) box.expand(s);
    if (box.empty()) return {};
    Vec3 c = box.center();
    double r2 = 0.0;
    for (const auto& v : g.vertices) r2 = std::max(r2, norm2(v.position - c));
    for (const auto& e : g.edges)
        for (const auto& s : e.samples) r2 = std::max(r2, norm2(s - c));
    return {c, std::sqrt(r2)};
}

inline void validate_graph(const WireframeGraph& g) {
    if (g.vertices.empty() || g.edges.empty())
        throw ValidationError("empty graph: needs at least one vertex and one edge");

    for (size_t i = 0; i < g.vertices.size(); ++i) {
        const auto& v = g.vertices[i];
        if (v.id != int(i))
            throw ValidationError("vertex id " + std::to_string(v.id) +
                                  " does not match its index " + std::to_string(i));
        if (!is_finite(v.position))
            throw ValidationError("vertex " + std::to_string(v.id) +
                                  " has a non-finite position");
    }

    const int nv = int(g.vertices.size());
    for (size_t i = 0; i < g.edges.size(); ++i) {
        const auto& e = g.edges[i];
        const std::string tag = "edge " + std::to_string(e.id);
        if (e.id != int(i))
            throw ValidationError(tag + " id does not match its index " + std::to_string(i));
        for (int vid : e.endpoints)
            if (vid < 0 || vid >= nv)
                throw ValidationError(tag + " references missing vertex " + std::to_string(vid));
        if (e.samples.size() < 2)
            throw ValidationError(tag + " has fewer than 2 polyline samples");
        for (const auto& s : e.samples)
            if (!is_finite(s)) throw ValidationError(tag + " has a non-finite sample");
        for (size_t k = 1; k < e.samples.size(); ++k)
            if (norm(e.samples[k] - e.samples[k - 1]) == 0.0)
                throw ValidationError(tag + " has two consecutive identical samples");

        const Vec3 a = g.vertices[e.endpoints[0]].position;
        const Vec3 b = g.vertices[e.endpoints[1]].position;
        if (norm(e.samples.front() - a) > kVertexTol || norm(e.samples.back() - b) > kVertexTol)
            throw ValidationError(tag + " samples do not terminate at its endpoint vertices");

        if (e.kind == EdgeKind::Line) {
            const Vec3 dir = e.samples.back() - e.samples.front();
            const double len = norm(dir);
            if (len <= kVertexTol)
                throw ValidationError(tag + " is a degenerate line (coincident endpoints)");
            const Vec3 d = dir / len;
            for (const auto& s : e.samples)
                if (point_line_distance(s, e.samples.front(), d) > kVertexTol)
                    throw ValidationError(tag + " is tagged line but its samples are not collinear");
        }
    }
}

namespace detail {

inline Vec3 json_vec3(const nlohmann::json& j, const char* what) {
    if (!j.is_array() || j.size() != 3 || !j[0].is_number() || !j[1].is_number() ||
        !j[2].is_number())
        throw ParseError(std::string(what) + " must be an [x, y, z] number triple");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

inline WireframeGraph parse_wirejson(std::istream& in) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("wirejson parse error at byte " + std::to_string(e.byte) + ": " +
                         e.what());
    }
    if (!doc.is_object() || !doc.contains("vertices") || !doc.contains("edges"))
        throw ParseError("wirejson document must contain 'vertices' and 'edges'");

    WireframeGraph g;
    const auto& jv = doc["vertices"];
    if (!jv.is_array()) throw ParseError("'vertices' must be an array");
    for (size_t i = 0; i < jv.size(); ++i)
        g.vertices.push_back({int(i), json_vec3(jv[i], "vertex")});

    const auto& je = doc["edges"];
    if (!je.is_array()) throw ParseError("'edges' must be an array");
    for (size_t i = 0; i < je.size(); ++i) {
        const auto& j = je[i];
        if (!j.is_object() || !j.contains("v"))
            throw ParseError("edge " + std::to_string(i) + " must be an object with 'v'");
        Edge e;
        e.id = int(i);
        const auto& v = j["v"];
        if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() ||
            !v[1].is_number_integer())
            throw ParseError("edge " + std::to_string(i) + " field 'v' must be two vertex ids");
        e.endpoints = {v[0].get<int>(), v[1].get<int>()};

        std::string kind = j.value("kind", std::string("line"));
        if (kind == "line")
            e.kind = EdgeKind::Line;
        else if (kind == "curve")
            e.kind = EdgeKind::Curve;
        else
            throw ParseError("edge " + std::to_string(i) + " has unknown kind '" + kind + "'");

        if (j.contains("samples")) {
            for (const auto& s : j["samples"]) e.samples.push_back(json_vec3(s, "sample"));
        } else if (e.kind == EdgeKind::Line) {
            // straight edges may omit samples; endpoints define the polyline
            for (int vid : e.endpoints) {
                if (vid < 0 || vid >= int(g.vertices.size()))
                    throw ValidationError("edge " + std::to_string(i) +
                                          " references missing vertex " + std::to_string(vid));
                e.samples.push_back(g.vertices[vid].position);
            }
        } else {
            throw ParseError("edge " + std::to_string(i) + " (curve) must carry samples");
        }
        g.edges.push_back(std::move(e));
    }
    return g;
}

inline WireframeGraph parse_obj_lines(std::istream& in) {
    WireframeGraph g;
    std::string line;
    int line_no = 0;
    std::vector<std::array<int, 2>> segments;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag)) continue;
        if (tag == "v") {
            Vec3 p;
            if (!(ls >> p.x >> p.y >> p.z))
                throw ParseError("obj line " + std::to_string(line_no) +
                                 ": 'v' record needs three coordinates");
            g.vertices.push_back({int(g.vertices.size()), p});
        } else if (tag == "l") {
            std::vector<int> idx;
            long v;
            while (ls >> v) {
                if (v <= 0)
                    throw ParseError("obj line " + std::to_string(line_no) +
                                     ": only positive 'l' indices are supported");
                idx.push_back(int(v - 1));
            }
            if (idx.size() < 2)
                throw ParseError("obj line " + std::to_string(line_no) +
                                 ": 'l' record needs at least two indices");
            for (size_t k = 1; k < idx.size(); ++k)
                segments.push_back({idx[k - 1], idx[k]});
        }
        // all other records are ignored
    }
    for (const auto& s : segments) {
        Edge e;
        e.id = int(g.edges.size());
        e.endpoints = s;
        e.kind = EdgeKind::Line;
        for (int vid : s) {
            if (vid < 0 || vid >= int(g.vertices.size()))
                throw ValidationError("edge " + std::to_string(e.id) +
                                      " references missing vertex " + std::to_string(vid));
            e.samples.push_back(g.vertices[vid].position);
        }
        g.edges.push_back(std::move(e));
    }
    return g;
}

}  // namespace detail

inline WireframeGraph load_wireframe(std::istream& in, WireFormat format) {
    WireframeGraph g = format == WireFormat::WireJson ? detail::parse_wirejson(in)
                                                      : detail::parse_obj_lines(in);
    validate_graph(g);
    g.bsphere = compute_bounding_sphere(g);
    return g;
}

inline WireframeGraph load_wireframe(const std::string& text, WireFormat format) {
    std::istringstream in(text);
    return load_wireframe(in, format);
}

inline std::string serialize_wirejson(const WireframeGraph& g) {
    nlohmann::json doc;
    auto& jv = doc["vertices"] = nlohmann::json::array();
    for (const auto& v : g.vertices) jv.push_back({v.position.x, v.position.y, v.position.z});
    auto& je = doc["edges"] = nlohmann::json::array();
    for (const auto& e : g.edges) {
        nlohmann::json j;
        j["v"] = {e.endpoints[0], e.endpoints[1]};
        j["kind"] = e.kind == EdgeKind::Line ? "line" : "curve";
        auto& js = j["samples"] = nlohmann::json::array();
        for (const auto& s : e.samples) js.push_back({s.x, s.y, s.z});
        je.push_back(std::move(j));
    }
    return doc.dump();
}

// Uniform scale + translation bringing the bounding sphere to (origin, 1).
inline WireframeGraph normalize_to_unit_sphere(const WireframeGraph& g) {
    BoundingSphere bs = compute_bounding_sphere(g);
    if (!(bs.radius > 1e-12))
        throw ValidationError("degenerate graph: bounding sphere radius is zero");
    const double inv_r = 1.0 / bs.radius;
    WireframeGraph out = g;
    for (auto& v : out.vertices) v.position = (v.position - bs.center) * inv_r;
    for (auto& e : out.edges)
        for (auto& s : e.samples) s = (s - bs.center) * inv_r;
    out.bsphere = {Vec3{0, 0, 0}, 1.0};
    return out;
}

// Vertex id -> incident edge ids (ascending). A closed edge whose endpoints
// coincide lands in a single bucket and is flagged as a self-loop.
struct Adjacency {
    std::vector<std::vector<int>> incident;
    std::vector<uint8_t> self_loop;
};

inline Adjacency build_adjacency(const WireframeGraph& g) {
    Adjacency adj;
    adj.incident.resize(g.vertices.size());
    adj.self_loop.assign(g.edges.size(), 0);
    for (const auto& e : g.edges) {
        adj.incident[e.endpoints[0]].push_back(e.id);
        if (e.endpoints[1] == e.endpoints[0])
            adj.self_loop[e.id] = 1;
        else
            adj.incident[e.endpoints[1]].push_back(e.id);
    }
    return adj;
}

}  // namespace sketchdepth
