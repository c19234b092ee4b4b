#pragma once

#include <cstdint>
#include <vector>

namespace sketchdepth {

// Row-major pixel grid; (0,0) is the top-left pixel.
template <class T>
struct Grid {
    int width = 0;
    int height = 0;
    std::vector<T> v;

    Grid() = default;
    Grid(int w, int h, T init = T{}) : width(w), height(h), v(size_t(w) * h, init) {}

    size_t size() const { return v.size(); }
    size_t index(int x, int y) const { return size_t(y) * width + x; }
    bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }

    T& operator()(int x, int y) { return v[index(x, y)]; }
    const T& operator()(int x, int y) const { return v[index(x, y)]; }

    bool same_shape(int w, int h) const { return width == w && height == h; }

    friend bool operator==(const Grid& a, const Grid& b) {
        return a.width == b.width && a.height == b.height && a.v == b.v;
    }
};

using MaskImage = Grid<uint8_t>;

inline long count_nonzero(const MaskImage& m) {
    long n = 0;
    for (auto p : m.v) n += (p != 0);
    return n;
}

}  // namespace sketchdepth
