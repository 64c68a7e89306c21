#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include <png.h>

#include "gsprune/errors.hpp"
#include "gsprune/rasterizer.hpp"

namespace gsprune {

// 8-bit RGB PNG; channel values are round(clamp(v) * 255), no gamma applied.
inline void save_png(const ImageBuffer& img, const std::string& path) {
    std::vector<png_byte> bytes(static_cast<std::size_t>(img.width) * img.height * 3);
    for (std::size_t i = 0; i < bytes.size(); ++i) {
        const float v = std::min(std::max(img.rgb[i], 0.0f), 1.0f);
        bytes[i] = static_cast<png_byte>(std::lround(v * 255.0f));
    }
    png_image pi;
    std::memset(&pi, 0, sizeof(pi));
    pi.version = PNG_IMAGE_VERSION;
    pi.width = static_cast<png_uint_32>(img.width);
    pi.height = static_cast<png_uint_32>(img.height);
    pi.format = PNG_FORMAT_RGB;
    if (!png_image_write_to_file(&pi, path.c_str(), 0, bytes.data(), 0, nullptr))
        throw io_error("failed writing PNG '" + path + "': " + pi.message);
}

inline ImageBuffer load_png(const std::string& path) {
    png_image pi;
    std::memset(&pi, 0, sizeof(pi));
    pi.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&pi, path.c_str()))
        throw format_error("cannot read PNG '" + path + "': " + pi.message);
    pi.format = PNG_FORMAT_RGB;
    std::vector<png_byte> bytes(PNG_IMAGE_SIZE(pi));
    if (!png_image_finish_read(&pi, nullptr, bytes.data(), 0, nullptr))
        throw format_error("cannot decode PNG '" + path + "': " + pi.message);
    ImageBuffer img(static_cast<int>(pi.width), static_cast<int>(pi.height));
    for (std::size_t i = 0; i < bytes.size(); ++i)
        img.rgb[i] = static_cast<float>(bytes[i]) / 255.0f;
    return img;
}

// --- raw float image dump: "GSPI", u32 width, u32 height, u32 channels (3),
// then width*height*3 little-endian float32 values, row-major RGB ---

inline void save_image_dump(const ImageBuffer& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot open '" + path + "' for writing");
    out.write("GSPI", 4);
    const std::uint32_t w = static_cast<std::uint32_t>(img.width);
    const std::uint32_t h = static_cast<std::uint32_t>(img.height);
    const std::uint32_t c = 3;
    out.write(reinterpret_cast<const char*>(&w), 4);
    out.write(reinterpret_cast<const char*>(&h), 4);
    out.write(reinterpret_cast<const char*>(&c), 4);
    out.write(reinterpret_cast<const char*>(img.rgb.data()),
              static_cast<std::streamsize>(img.rgb.size() * 4));
    if (!out) throw io_error("failed writing '" + path + "'");
}

inline ImageBuffer load_image_dump(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open '" + path + "' for reading");
    char magic[4] = {};
    in.read(magic, 4);
    if (in.gcount() != 4 || std::memcmp(magic, "GSPI", 4) != 0)
        throw format_error("'" + path + "': bad image dump magic");
    std::uint32_t w = 0, h = 0, c = 0;
    in.read(reinterpret_cast<char*>(&w), 4);
    in.read(reinterpret_cast<char*>(&h), 4);
    in.read(reinterpret_cast<char*>(&c), 4);
    if (!in) throw io_error("'" + path + "': truncated header");
    if (c != 3) throw format_error("'" + path + "': expected 3 channels, got " + std::to_string(c));
    ImageBuffer img(static_cast<int>(w), static_cast<int>(h));
    in.read(reinterpret_cast<char*>(img.rgb.data()),
            static_cast<std::streamsize>(img.rgb.size() * 4));
    if (static_cast<std::size_t>(in.gcount()) != img.rgb.size() * 4)
        throw io_error("'" + path + "': truncated pixel data");
    return img;
}

// Dispatches on extension: .png uses the PNG codec, anything else the raw
// float dump.
inline ImageBuffer load_image(const std::string& path) {
    if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".png") == 0) return load_png(path);
    return load_image_dump(path);
}

inline void save_image(const ImageBuffer& img, const std::string& path) {
    if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".png") == 0) {
        save_png(img, path);
        return;
    }
    save_image_dump(img, path);
}

} // namespace gsprune
