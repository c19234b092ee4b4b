#pragma once

#include <deque>
#include <vector>

#include "sketchdepth/depth.hpp"
#include "sketchdepth/errors.hpp"
#include "sketchdepth/raster.hpp"
#include "sketchdepth/rng.hpp"
#include "sketchdepth/wireframe.hpp"

namespace sketchdepth {

// Conditioning pair (p, m): depth revealed along a BFS-connected subset of
// edges, simulating an intermediate drawing state.
struct PartialDepthPair {
    DepthImage partial;              // NormalizedDisparity; validity equals mask
    MaskImage mask;                  // m
    std::vector<int> revealed_edges; // in reveal order
    double coverage = 0.0;           // revealed stroke pixels / total stroke pixels
    int restarts = 0;                // BFS restarts beyond the initial start vertex
};

// How the stop threshold k is measured: share of stroke pixels revealed
// (default) or share of edges revealed (ablation flag).
enum class CoverageBasis { Pixels, Edges };

namespace detail {

inline std::vector<std::vector<size_t>> edge_pixel_lists(const RenderBundle& b,
                                                         size_t edge_count) {
    std::vector<std::vector<size_t>> px(edge_count);
    for (size_t idx = 0; idx < b.cover.size(); ++idx)
        for (const auto& hit : b.cover[idx]) px[hit.edge].push_back(idx);
    return px;
}

}  // namespace detail

// BFS reveal: start at a uniformly random vertex, walk edges in BFS order
// (neighbor edges in ascending id), and reveal each visited edge's stroke
// pixels until coverage reaches k. Exhausted components trigger a restart
// from a random unvisited vertex. The traversal consumes randomness
// independently of k, so edge sets nest monotonically in k for a fixed seed.
inline PartialDepthPair bfs_partial_mask(const RenderBundle& bundle, const WireframeGraph& g,
                                         double k, uint64_t seed,
                                         CoverageBasis basis = CoverageBasis::Pixels) {
    if (k < 0.0 || k > 1.0) throw RangeError("coverage threshold k must lie in [0, 1]");

    const Adjacency adj = build_adjacency(g);
    const auto edge_px = detail::edge_pixel_lists(bundle, g.edges.size());
    const long total_px = count_nonzero(bundle.mask);
    const long total_edges = long(g.edges.size());

    PartialDepthPair out;
    out.partial = DepthImage::make(bundle.width, bundle.height, bundle.config,
                                   DepthSpace::NormalizedDisparity);
    out.mask = MaskImage(bundle.width, bundle.height, 0);

    Rng rng(seed);
    std::vector<uint8_t> seen_v(g.vertices.size(), 0);
    std::vector<uint8_t> seen_e(g.edges.size(), 0);
    std::deque<int> queue;
    long revealed_px = 0;
    bool started = false;

    auto coverage_now = [&]() -> double {
        if (basis == CoverageBasis::Edges)
            return total_edges > 0 ? double(out.revealed_edges.size()) / total_edges : 0.0;
        return total_px > 0 ? double(revealed_px) / total_px : 0.0;
    };

    auto pick_unseen_vertex = [&]() -> int {
        long unseen = 0;
        for (auto s : seen_v) unseen += (s == 0);
        if (unseen == 0) return -1;
        long want = long(rng.uniform_int(uint64_t(unseen)));
        for (size_t i = 0; i < seen_v.size(); ++i) {
            if (seen_v[i]) continue;
            if (want-- == 0) return int(i);
        }
        return -1;
    };

    auto reveal = [&](int eid) {
        out.revealed_edges.push_back(eid);
        for (size_t idx : edge_px[eid]) {
            if (out.mask.v[idx]) continue;
            out.mask.v[idx] = 1;
            out.partial.values.v[idx] = bundle.disparity.v[idx];
            out.partial.validity.v[idx] = 1;
            ++revealed_px;
        }
    };

    while (coverage_now() < k) {
        if (queue.empty()) {
            int start = pick_unseen_vertex();
            if (start < 0) break;  // everything visited
            if (started) ++out.restarts;
            started = true;
            seen_v[start] = 1;
            queue.push_back(start);
            continue;
        }
        const int v = queue.front();
        queue.pop_front();
        for (int eid : adj.incident[v]) {
            if (seen_e[eid]) continue;
            seen_e[eid] = 1;
            reveal(eid);
            const auto& ep = g.edges[eid].endpoints;
            const int w = ep[0] == v ? ep[1] : ep[0];
            if (!seen_v[w]) {
                seen_v[w] = 1;
                queue.push_back(w);
            }
            if (coverage_now() >= k) goto done;
        }
    }
done:
    out.coverage = total_px > 0 ? double(revealed_px) / total_px : 0.0;
    return out;
}

// Training-time conditioning draw: an empty pair with probability 0.5,
// otherwise a BFS reveal at k ~ U[0.10, 0.90].
inline PartialDepthPair sample_training_condition(const RenderBundle& bundle,
                                                  const WireframeGraph& g, uint64_t seed,
                                                  CoverageBasis basis = CoverageBasis::Pixels) {
    Rng rng(seed);
    if (rng.uniform01() < 0.5) {
        PartialDepthPair out;
        out.partial = DepthImage::make(bundle.width, bundle.height, bundle.config,
                                       DepthSpace::NormalizedDisparity);
        out.mask = MaskImage(bundle.width, bundle.height, 0);
        return out;
    }
    const double k = rng.uniform(0.10, 0.90);
    return bfs_partial_mask(bundle, g, k, rng.next_u64(), basis);
}

}  // namespace sketchdepth
