#include "swarmthresh/image.hpp"

#include <png.h>

#include <cctype>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "swarmthresh/error.hpp"

namespace swarmthresh {

namespace {

// (299 R + 587 G + 114 B + 500) / 1000, the integer rec-601 luma rounded
// to nearest.
inline std::uint8_t luma601(unsigned r, unsigned g, unsigned b) {
    return static_cast<std::uint8_t>((299u * r + 587u * g + 114u * b + 500u) / 1000u);
}

// RAII wrapper around the libpng read machinery so that the longjmp-based
// error path can throw from a clean state.
class PngReader {
public:
    explicit PngReader(const std::string &path) : path_(path) {
        file_ = std::fopen(path.c_str(), "rb");
        if (!file_) throw FileNotFound(path);
        png_ = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
        if (png_) info_ = png_create_info_struct(png_);
        if (!png_ || !info_) throw IoError(path, "libpng allocation failed");
    }

    PngReader(const PngReader &) = delete;
    PngReader &operator=(const PngReader &) = delete;

    ~PngReader() {
        if (png_) png_destroy_read_struct(&png_, info_ ? &info_ : nullptr, nullptr);
        if (file_) std::fclose(file_);
    }

    GrayImage read() {
        if (setjmp(png_jmpbuf(png_)))
            throw CorruptImage(path_, "png decode failed");

        png_init_io(png_, file_);
        png_read_info(png_, info_);

        png_uint_32 width = png_get_image_width(png_, info_);
        png_uint_32 height = png_get_image_height(png_, info_);
        int color_type = png_get_color_type(png_, info_);
        int bit_depth = png_get_bit_depth(png_, info_);

        if (width == 0 || height == 0)
            throw CorruptImage(path_, "zero-sized image");

        if (color_type == PNG_COLOR_TYPE_PALETTE)
            png_set_palette_to_rgb(png_);
        if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8)
            png_set_expand_gray_1_2_4_to_8(png_);
        if (png_get_valid(png_, info_, PNG_INFO_tRNS))
            png_set_tRNS_to_alpha(png_);
        png_set_interlace_handling(png_);
        png_read_update_info(png_, info_);

        color_type = png_get_color_type(png_, info_);
        bit_depth = png_get_bit_depth(png_, info_);
        std::size_t rowbytes = png_get_rowbytes(png_, info_);

        rows_.assign(static_cast<std::size_t>(height) * rowbytes, 0);
        row_ptrs_.resize(height);
        for (png_uint_32 y = 0; y < height; ++y)
            row_ptrs_[y] = rows_.data() + static_cast<std::size_t>(y) * rowbytes;
        png_read_image(png_, row_ptrs_.data());
        png_read_end(png_, nullptr);

        GrayImage img;
        img.width = static_cast<int>(width);
        img.height = static_cast<int>(height);
        img.pixels.resize(static_cast<std::size_t>(width) * height);

        int channels = 1;
        switch (color_type) {
        case PNG_COLOR_TYPE_GRAY: channels = 1; break;
        case PNG_COLOR_TYPE_GRAY_ALPHA: channels = 2; break;
        case PNG_COLOR_TYPE_RGB: channels = 3; break;
        case PNG_COLOR_TYPE_RGB_ALPHA: channels = 4; break;
        default:
            throw UnsupportedFormat(path_, "unexpected png color type");
        }

        const bool wide = bit_depth == 16;
        const int bytes_per_sample = wide ? 2 : 1;
        // 16-bit samples are network byte order; scale to [0, 255] by
        // integer division by 257 before any color conversion.
        auto sample = [&](const std::uint8_t *p, int c) -> unsigned {
            const std::uint8_t *s = p + c * bytes_per_sample;
            if (wide) {
                unsigned v = (static_cast<unsigned>(s[0]) << 8) | s[1];
                return v / 257u;
            }
            return *s;
        };

        const int stride = channels * bytes_per_sample;
        for (png_uint_32 y = 0; y < height; ++y) {
            const std::uint8_t *row = row_ptrs_[y];
            std::uint8_t *out = img.pixels.data() + static_cast<std::size_t>(y) * width;
            for (png_uint_32 x = 0; x < width; ++x) {
                const std::uint8_t *p = row + static_cast<std::size_t>(x) * stride;
                if (channels <= 2) {
                    out[x] = static_cast<std::uint8_t>(sample(p, 0));
                } else {
                    out[x] = luma601(sample(p, 0), sample(p, 1), sample(p, 2));
                }
            }
        }
        return img;
    }

private:
    std::string path_;
    FILE *file_ = nullptr;
    png_structp png_ = nullptr;
    png_infop info_ = nullptr;
    std::vector<std::uint8_t> rows_;
    std::vector<png_bytep> row_ptrs_;
};

class PngWriter {
public:
    explicit PngWriter(const std::string &path) : path_(path) {
        file_ = std::fopen(path.c_str(), "wb");
        if (!file_) throw IoError(path, "cannot open for writing");
        png_ = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
        if (png_) info_ = png_create_info_struct(png_);
        if (!png_ || !info_) throw IoError(path, "libpng allocation failed");
    }

    PngWriter(const PngWriter &) = delete;
    PngWriter &operator=(const PngWriter &) = delete;

    ~PngWriter() {
        if (png_) png_destroy_write_struct(&png_, info_ ? &info_ : nullptr);
        if (file_) std::fclose(file_);
    }

    void write(const GrayImage &img) {
        if (setjmp(png_jmpbuf(png_)))
            throw IoError(path_, "png encode failed");

        png_init_io(png_, file_);
        png_set_IHDR(png_, info_, img.width, img.height, 8, PNG_COLOR_TYPE_GRAY,
                     PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                     PNG_FILTER_TYPE_DEFAULT);
        png_write_info(png_, info_);
        row_ptrs_.resize(img.height);
        for (int y = 0; y < img.height; ++y)
            row_ptrs_[y] = const_cast<png_bytep>(img.pixels.data() +
                                                 static_cast<std::size_t>(y) * img.width);
        png_write_image(png_, row_ptrs_.data());
        png_write_end(png_, nullptr);
    }

private:
    std::string path_;
    FILE *file_ = nullptr;
    png_structp png_ = nullptr;
    png_infop info_ = nullptr;
    std::vector<png_bytep> row_ptrs_;
};

// P5 header fields are separated by whitespace; '#' starts a comment that
// runs to end of line.
long pgm_next_int(std::istream &in, const std::string &path) {
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {}
        } else if (!std::isspace(c)) {
            break;
        }
    }
    if (c == EOF || !std::isdigit(c))
        throw CorruptImage(path, "bad pgm header");
    long v = c - '0';
    while ((c = in.peek()) != EOF && std::isdigit(c)) {
        in.get();
        v = v * 10 + (c - '0');
        if (v > 0xFFFFFF) throw CorruptImage(path, "pgm header value out of range");
    }
    return v;
}

GrayImage load_pgm(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileNotFound(path);
    char magic[2] = {0, 0};
    in.read(magic, 2);
    if (magic[0] != 'P' || magic[1] != '5')
        throw UnsupportedFormat(path, "only binary P5 pgm is accepted");

    long w = pgm_next_int(in, path);
    long h = pgm_next_int(in, path);
    long maxval = pgm_next_int(in, path);
    if (w <= 0 || h <= 0 || maxval <= 0 || maxval > 65535)
        throw CorruptImage(path, "bad pgm dimensions or maxval");
    int sep = in.get(); // single whitespace before the raster
    if (sep == EOF || !std::isspace(sep))
        throw CorruptImage(path, "missing raster separator");

    const std::size_t n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
    const int bytes_per_sample = maxval > 255 ? 2 : 1;
    std::vector<char> raw(n * bytes_per_sample);
    in.read(raw.data(), static_cast<std::streamsize>(raw.size()));
    if (static_cast<std::size_t>(in.gcount()) != raw.size())
        throw CorruptImage(path, "truncated pgm raster");

    GrayImage img;
    img.width = static_cast<int>(w);
    img.height = static_cast<int>(h);
    img.pixels.resize(n);
    const auto *bytes = reinterpret_cast<const std::uint8_t *>(raw.data());
    for (std::size_t i = 0; i < n; ++i) {
        unsigned v;
        if (bytes_per_sample == 2)
            v = (static_cast<unsigned>(bytes[2 * i]) << 8) | bytes[2 * i + 1];
        else
            v = bytes[i];
        if (v > static_cast<unsigned>(maxval))
            throw CorruptImage(path, "sample exceeds maxval");
        // Identity for maxval 255; for 65535 this is division by 257.
        if (maxval != 255) v = v * 255u / static_cast<unsigned>(maxval);
        img.pixels[i] = static_cast<std::uint8_t>(v);
    }
    return img;
}

} // namespace

GrayImage load_image(const std::string &path) {
    std::ifstream probe(path, std::ios::binary);
    if (!probe) {
        if (!std::filesystem::exists(path)) throw FileNotFound(path);
        throw IoError(path, "cannot open");
    }
    unsigned char magic[8] = {};
    probe.read(reinterpret_cast<char *>(magic), sizeof(magic));
    const std::streamsize got = probe.gcount();
    probe.close();

    static const unsigned char png_sig[8] = {137, 'P', 'N', 'G', 13, 10, 26, 10};
    if (got >= 8 && std::memcmp(magic, png_sig, 8) == 0)
        return PngReader(path).read();
    if (got >= 2 && magic[0] == 'P' && magic[1] == '5')
        return load_pgm(path);
    throw UnsupportedFormat(path, "not a png or binary pgm file");
}

void write_image(const GrayImage &img, const std::string &path) {
    if (img.width <= 0 || img.height <= 0 ||
        img.pixels.size() != static_cast<std::size_t>(img.width) * img.height)
        throw IoError(path, "invalid image dimensions");
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty() && !std::filesystem::is_directory(parent))
        throw IoError(path, "parent directory does not exist");
    PngWriter(path).write(img);
}

} // namespace swarmthresh
