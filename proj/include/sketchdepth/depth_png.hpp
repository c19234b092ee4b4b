#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <png.h>
#include <nlohmann/json.hpp>

#include "sketchdepth/depth.hpp"
#include "sketchdepth/errors.hpp"
#include "sketchdepth/image.hpp"

namespace sketchdepth {

// Disparity images persist as 16-bit grayscale PNGs. Code 0 marks invalid
// pixels; valid y in [0, 1] maps affinely onto codes 1..65535. The disparity
// config travels in a JSON sidecar next to the image.
constexpr uint16_t kDepthCodeMax = 65535;
constexpr double kDepthCodeScale = 65534.0;

inline uint16_t disparity_to_code(double y) {
    return uint16_t(1 + llround(y * kDepthCodeScale));
}

inline double code_to_disparity(uint16_t code) {
    return double(code - 1) / kDepthCodeScale;
}

namespace detail {

struct PngWriteSink {
    std::vector<uint8_t>* out;
};

inline void png_write_cb(png_structp png, png_bytep data, png_size_t len) {
    auto* sink = static_cast<PngWriteSink*>(png_get_io_ptr(png));
    sink->out->insert(sink->out->end(), data, data + len);
}

inline void png_flush_cb(png_structp) {}

struct PngReadSource {
    const uint8_t* data;
    size_t size;
    size_t pos;
};

inline void png_read_cb(png_structp png, png_bytep data, png_size_t len) {
    auto* src = static_cast<PngReadSource*>(png_get_io_ptr(png));
    if (src->pos + len > src->size) png_error(png, "unexpected end of PNG stream");
    std::memcpy(data, src->data + src->pos, len);
    src->pos += len;
}

// One-shot grayscale PNG encode; bit_depth is 1, 8 or 16. Rows are packed
// big-endian for 16-bit as PNG requires.
inline std::vector<uint8_t> encode_gray_png(const std::vector<uint16_t>& pixels, int w, int h,
                                            int bit_depth) {
    std::vector<uint8_t> out;
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw IoError("libpng: failed to create write struct");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw IoError("libpng: failed to create info struct");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("libpng: write failed");
    }
    PngWriteSink sink{&out};
    png_set_write_fn(png, &sink, png_write_cb, png_flush_cb);
    png_set_IHDR(png, info, w, h, bit_depth, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_set_compression_level(png, 6);
    png_write_info(png, info);

    const size_t rowbytes = png_get_rowbytes(png, info);
    std::vector<uint8_t> row(rowbytes);
    for (int y = 0; y < h; ++y) {
        std::fill(row.begin(), row.end(), 0);
        if (bit_depth == 16) {
            for (int x = 0; x < w; ++x) {
                uint16_t c = pixels[size_t(y) * w + x];
                row[2 * x] = uint8_t(c >> 8);
                row[2 * x + 1] = uint8_t(c & 0xff);
            }
        } else if (bit_depth == 8) {
            for (int x = 0; x < w; ++x) row[x] = uint8_t(pixels[size_t(y) * w + x]);
        } else {  // 1-bit, MSB first
            for (int x = 0; x < w; ++x)
                if (pixels[size_t(y) * w + x]) row[x / 8] |= uint8_t(0x80 >> (x % 8));
        }
        png_write_row(png, row.data());
    }
    png_write_end(png, info);
    png_destroy_write_struct(&png, &info);
    return out;
}

struct GrayPng {
    int width = 0;
    int height = 0;
    int bit_depth = 0;
    std::vector<uint16_t> pixels;
};

inline GrayPng decode_gray_png(const std::vector<uint8_t>& bytes) {
    if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0)
        throw FormatError("not a PNG stream");
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw IoError("libpng: failed to create read struct");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw IoError("libpng: failed to create info struct");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw FormatError("corrupt PNG stream");
    }
    PngReadSource src{bytes.data(), bytes.size(), 0};
    png_set_read_fn(png, &src, png_read_cb);
    png_read_info(png, info);

    GrayPng img;
    img.width = int(png_get_image_width(png, info));
    img.height = int(png_get_image_height(png, info));
    img.bit_depth = int(png_get_bit_depth(png, info));
    const int color = png_get_color_type(png, info);
    if (color != PNG_COLOR_TYPE_GRAY) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw FormatError("expected a grayscale PNG");
    }
    if (img.bit_depth < 8) png_set_packing(png);
    png_read_update_info(png, info);

    const size_t rowbytes = png_get_rowbytes(png, info);
    std::vector<uint8_t> row(rowbytes);
    img.pixels.resize(size_t(img.width) * img.height);
    for (int y = 0; y < img.height; ++y) {
        png_read_row(png, row.data(), nullptr);
        if (img.bit_depth == 16) {
            for (int x = 0; x < img.width; ++x)
                img.pixels[size_t(y) * img.width + x] =
                    uint16_t((row[2 * x] << 8) | row[2 * x + 1]);
        } else {
            for (int x = 0; x < img.width; ++x)
                img.pixels[size_t(y) * img.width + x] = row[x];
        }
    }
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

}  // namespace detail

inline std::string depth_sidecar_json(const DisparityConfig& cfg) {
    nlohmann::json j;
    j["z_near"] = cfg.z_near;
    j["z_far"] = cfg.z_far;
    j["space"] = "normalized_disparity";
    return j.dump();
}

inline DisparityConfig parse_depth_sidecar(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(std::string("depth sidecar is not valid JSON: ") + e.what());
    }
    if (!j.contains("z_near") || !j.contains("z_far") || !j.contains("space"))
        throw FormatError("depth sidecar must carry z_near, z_far and space");
    if (j["space"] != "normalized_disparity")
        throw FormatError("depth sidecar space must be 'normalized_disparity'");
    DisparityConfig cfg{j["z_near"].get<double>(), j["z_far"].get<double>()};
    cfg.validate();
    return cfg;
}

inline std::vector<uint8_t> encode_depth_png(const DepthImage& img) {
    if (img.space != DepthSpace::NormalizedDisparity)
        throw RangeError("encode_depth_png expects NormalizedDisparity");
    std::vector<uint16_t> codes(img.values.size(), 0);
    for (size_t i = 0; i < img.values.size(); ++i) {
        if (!img.validity.v[i]) continue;
        const double y = img.values.v[i];
        if (y < 0.0 || y > 1.0) throw RangeError("disparity outside [0, 1] in encode_depth_png");
        codes[i] = disparity_to_code(y);
    }
    return detail::encode_gray_png(codes, img.width(), img.height(), 16);
}

inline DepthImage decode_depth_png(const std::vector<uint8_t>& bytes,
                                   const std::string& sidecar_json) {
    const DisparityConfig cfg = parse_depth_sidecar(sidecar_json);
    detail::GrayPng raw = detail::decode_gray_png(bytes);
    if (raw.bit_depth != 16)
        throw FormatError("depth PNG must be 16-bit grayscale, got depth " +
                          std::to_string(raw.bit_depth));
    DepthImage img =
        DepthImage::make(raw.width, raw.height, cfg, DepthSpace::NormalizedDisparity);
    for (size_t i = 0; i < raw.pixels.size(); ++i) {
        if (raw.pixels[i] == 0) continue;
        img.values.v[i] = code_to_disparity(raw.pixels[i]);
        img.validity.v[i] = 1;
    }
    return img;
}

inline std::vector<uint8_t> encode_mask_png(const MaskImage& mask) {
    std::vector<uint16_t> px(mask.size());
    for (size_t i = 0; i < mask.size(); ++i) px[i] = mask.v[i] ? 1 : 0;
    return detail::encode_gray_png(px, mask.width, mask.height, 1);
}

inline MaskImage decode_mask_png(const std::vector<uint8_t>& bytes) {
    detail::GrayPng raw = detail::decode_gray_png(bytes);
    MaskImage mask(raw.width, raw.height, 0);
    for (size_t i = 0; i < raw.pixels.size(); ++i) mask.v[i] = raw.pixels[i] ? 1 : 0;
    return mask;
}

// -------- file helpers --------

inline void write_file_bytes(const std::filesystem::path& path, const std::vector<uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
    if (!out) throw IoError("write failed: " + path.string());
}

inline std::vector<uint8_t> read_file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << text;
    if (!out) throw IoError("write failed: " + path.string());
}

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void save_depth_png(const std::filesystem::path& png_path, const DepthImage& img) {
    write_file_bytes(png_path, encode_depth_png(img));
    std::filesystem::path sidecar = png_path;
    sidecar.replace_extension(".json");
    write_text_file(sidecar, depth_sidecar_json(img.config));
}

inline DepthImage load_depth_png(const std::filesystem::path& png_path) {
    std::filesystem::path sidecar = png_path;
    sidecar.replace_extension(".json");
    if (!std::filesystem::exists(sidecar))
        throw FormatError("missing depth sidecar: " + sidecar.string());
    return decode_depth_png(read_file_bytes(png_path), read_text_file(sidecar));
}

}  // namespace sketchdepth
