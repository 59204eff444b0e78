#include "core/image_io.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <memory>
#include <vector>

#include <jpeglib.h>
#include <png.h>

namespace srforge {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::string& path, const char* mode) {
    std::FILE* f = std::fopen(path.c_str(), mode);
    if (!f) {
        if (errno == ENOENT)
            fail(ErrorCode::NotFound, "file not found: " + path);
        fail(ErrorCode::Io, "cannot open " + path + ": " + std::strerror(errno));
    }
    return FilePtr(f);
}

uint8_t to_u8(float v) {
    v = std::min(1.0f, std::max(0.0f, v));
    return static_cast<uint8_t>(std::lround(v * 255.0f));
}

std::string lower_ext(const std::string& path) {
    auto dot = path.find_last_of('.');
    if (dot == std::string::npos) return {};
    std::string ext = path.substr(dot + 1);
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return ext;
}

// ---------------------------------------------------------------- PNG

struct PngReadGuard {
    png_structp png = nullptr;
    png_infop info = nullptr;
    ~PngReadGuard() {
        if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
    }
};

struct PngWriteGuard {
    png_structp png = nullptr;
    png_infop info = nullptr;
    ~PngWriteGuard() {
        if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
    }
};

RasterImage load_png(std::FILE* f, const std::string& path) {
    PngReadGuard g;
    g.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!g.png) fail(ErrorCode::Internal, "png_create_read_struct failed");
    g.info = png_create_info_struct(g.png);
    if (!g.info) fail(ErrorCode::Internal, "png_create_info_struct failed");

    std::vector<uint8_t> pixels;
    std::vector<png_bytep> rows;
    if (setjmp(png_jmpbuf(g.png)))
        fail(ErrorCode::CorruptFile, "corrupt PNG file: " + path);

    png_init_io(g.png, f);
    png_read_info(g.png, g.info);

    png_uint_32 w = png_get_image_width(g.png, g.info);
    png_uint_32 h = png_get_image_height(g.png, g.info);
    int depth = png_get_bit_depth(g.png, g.info);
    int color = png_get_color_type(g.png, g.info);

    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(g.png);
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8)
        png_set_expand_gray_1_2_4_to_8(g.png);
    if (depth == 16) png_set_strip_16(g.png);
    if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(g.png);
    if (png_get_valid(g.png, g.info, PNG_INFO_tRNS))
        png_set_strip_alpha(g.png);
    png_read_update_info(g.png, g.info);

    color = png_get_color_type(g.png, g.info);
    uint32_t channels = (color == PNG_COLOR_TYPE_GRAY) ? 1 : 3;
    if (color != PNG_COLOR_TYPE_GRAY && color != PNG_COLOR_TYPE_RGB)
        fail(ErrorCode::UnsupportedFormat,
             "unsupported PNG color type in " + path);

    pixels.resize(static_cast<std::size_t>(w) * h * channels);
    rows.resize(h);
    for (png_uint_32 y = 0; y < h; ++y)
        rows[y] = pixels.data() + static_cast<std::size_t>(y) * w * channels;
    png_read_image(g.png, rows.data());
    png_read_end(g.png, nullptr);

    std::vector<float> data(pixels.size());
    for (std::size_t i = 0; i < pixels.size(); ++i)
        data[i] = static_cast<float>(pixels[i]) / 255.0f;
    return RasterImage(w, h, channels, std::move(data));
}

void save_png(const RasterImage& img, std::FILE* f, const std::string& path) {
    PngWriteGuard g;
    g.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!g.png) fail(ErrorCode::Internal, "png_create_write_struct failed");
    g.info = png_create_info_struct(g.png);
    if (!g.info) fail(ErrorCode::Internal, "png_create_info_struct failed");

    const uint32_t c = img.channels();
    std::vector<uint8_t> pixels(img.value_count());
    for (std::size_t i = 0; i < pixels.size(); ++i)
        pixels[i] = to_u8(img.data()[i]);
    std::vector<png_bytep> rows(img.height());
    for (uint32_t y = 0; y < img.height(); ++y)
        rows[y] = pixels.data() + static_cast<std::size_t>(y) * img.width() * c;

    if (setjmp(png_jmpbuf(g.png)))
        fail(ErrorCode::Io, "PNG write failed: " + path);

    png_init_io(g.png, f);
    png_set_IHDR(g.png, g.info, img.width(), img.height(), 8,
                 c == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(g.png, g.info);
    png_write_image(g.png, rows.data());
    png_write_end(g.png, nullptr);
}

// ---------------------------------------------------------------- PPM (P6)

int ppm_next_token(std::FILE* f, char* buf, std::size_t cap) {
    int c;
    do {
        c = std::fgetc(f);
        if (c == '#') {
            while (c != EOF && c != '\n') c = std::fgetc(f);
        }
    } while (c != EOF && std::isspace(c));
    if (c == EOF) return -1;
    std::size_t n = 0;
    while (c != EOF && !std::isspace(c)) {
        if (n + 1 < cap) buf[n++] = static_cast<char>(c);
        c = std::fgetc(f);
    }
    buf[n] = '\0';
    return 0;
}

RasterImage load_ppm(std::FILE* f, const std::string& path) {
    char tok[32];
    long dims[3];
    if (ppm_next_token(f, tok, sizeof tok) != 0 || std::strcmp(tok, "P6") != 0)
        fail(ErrorCode::CorruptFile, "bad PPM header in " + path);
    for (long& d : dims) {
        if (ppm_next_token(f, tok, sizeof tok) != 0)
            fail(ErrorCode::Truncated, "truncated PPM header in " + path);
        char* end = nullptr;
        d = std::strtol(tok, &end, 10);
        if (end == tok || *end != '\0' || d <= 0)
            fail(ErrorCode::CorruptFile, "bad PPM header in " + path);
    }
    if (dims[2] != 255)
        fail(ErrorCode::UnsupportedFormat,
             "PPM maxval must be 255 in " + path);

    const std::size_t n = static_cast<std::size_t>(dims[0]) * dims[1] * 3;
    std::vector<uint8_t> pixels(n);
    if (std::fread(pixels.data(), 1, n, f) != n)
        fail(ErrorCode::Truncated, "truncated PPM pixel data in " + path);

    std::vector<float> data(n);
    for (std::size_t i = 0; i < n; ++i)
        data[i] = static_cast<float>(pixels[i]) / 255.0f;
    return RasterImage(static_cast<uint32_t>(dims[0]),
                       static_cast<uint32_t>(dims[1]), 3, std::move(data));
}

void save_ppm(const RasterImage& img, std::FILE* f, const std::string& path) {
    if (img.channels() != 3)
        fail(ErrorCode::ChannelMismatch, "PPM (P6) requires a 3-channel image");
    char header[64];
    int len = std::snprintf(header, sizeof header, "P6\n%u %u\n255\n",
                            img.width(), img.height());
    std::vector<uint8_t> pixels(img.value_count());
    for (std::size_t i = 0; i < pixels.size(); ++i)
        pixels[i] = to_u8(img.data()[i]);
    if (std::fwrite(header, 1, static_cast<std::size_t>(len), f) !=
            static_cast<std::size_t>(len) ||
        std::fwrite(pixels.data(), 1, pixels.size(), f) != pixels.size())
        fail(ErrorCode::Io, "PPM write failed: " + path);
}

// ---------------------------------------------------------------- JPEG

struct JpegError {
    jpeg_error_mgr mgr;
    std::jmp_buf jump;
};

void jpeg_error_exit(j_common_ptr cinfo) {
    auto* err = reinterpret_cast<JpegError*>(cinfo->err);
    std::longjmp(err->jump, 1);
}

RasterImage load_jpeg(std::FILE* f, const std::string& path) {
    jpeg_decompress_struct cinfo;
    JpegError jerr;
    cinfo.err = jpeg_std_error(&jerr.mgr);
    jerr.mgr.error_exit = jpeg_error_exit;

    std::vector<uint8_t> pixels;
    if (setjmp(jerr.jump)) {
        jpeg_destroy_decompress(&cinfo);
        fail(ErrorCode::CorruptFile, "corrupt JPEG file: " + path);
    }

    jpeg_create_decompress(&cinfo);
    jpeg_stdio_src(&cinfo, f);
    jpeg_read_header(&cinfo, TRUE);
    cinfo.out_color_space = cinfo.num_components == 1 ? JCS_GRAYSCALE : JCS_RGB;
    jpeg_start_decompress(&cinfo);

    const uint32_t w = cinfo.output_width;
    const uint32_t h = cinfo.output_height;
    const uint32_t channels = cinfo.output_components;
    pixels.resize(static_cast<std::size_t>(w) * h * channels);
    while (cinfo.output_scanline < h) {
        JSAMPROW row =
            pixels.data() + static_cast<std::size_t>(cinfo.output_scanline) * w * channels;
        jpeg_read_scanlines(&cinfo, &row, 1);
    }
    jpeg_finish_decompress(&cinfo);
    jpeg_destroy_decompress(&cinfo);

    std::vector<float> data(pixels.size());
    for (std::size_t i = 0; i < pixels.size(); ++i)
        data[i] = static_cast<float>(pixels[i]) / 255.0f;
    return RasterImage(w, h, channels, std::move(data));
}

} // namespace

RasterImage load_image(const std::string& path) {
    FilePtr f = open_file(path, "rb");
    uint8_t magic[8] = {0};
    std::size_t got = std::fread(magic, 1, sizeof magic, f.get());
    if (got < 2) fail(ErrorCode::CorruptFile, "file too short: " + path);
    std::rewind(f.get());

    static const uint8_t png_sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
    if (got == 8 && std::memcmp(magic, png_sig, 8) == 0)
        return load_png(f.get(), path);
    if (magic[0] == 'P' && magic[1] == '6') return load_ppm(f.get(), path);
    if (magic[0] == 0xFF && magic[1] == 0xD8) return load_jpeg(f.get(), path);
    fail(ErrorCode::UnsupportedFormat, "unrecognized image format: " + path);
}

void save_image(const RasterImage& img, const std::string& path) {
    const std::string ext = lower_ext(path);
    if (ext == "jpg" || ext == "jpeg")
        fail(ErrorCode::UnsupportedFormat,
             "JPEG output is not supported (decode only): " + path);
    if (ext != "png" && ext != "ppm")
        fail(ErrorCode::UnsupportedFormat, "unsupported output format: " + path);
    FilePtr f = open_file(path, "wb");
    if (ext == "png")
        save_png(img, f.get(), path);
    else
        save_ppm(img, f.get(), path);
    if (std::fflush(f.get()) != 0)
        fail(ErrorCode::Io, "write failed: " + path);
}

} // namespace srforge
