#include "dictscan/image_io.hpp"

#include <png.h>
#include <tiffio.h>

#include <cstdio>
#include <fstream>
#include <memory>

#include "dictscan/error.hpp"
#include "dictscan/imaging.hpp"

namespace dictscan {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const noexcept {
        if (f) std::fclose(f);
    }
};
using File = std::unique_ptr<std::FILE, FileCloser>;

struct TiffCloser {
    void operator()(TIFF* t) const noexcept {
        if (t) TIFFClose(t);
    }
};
using Tiff = std::unique_ptr<TIFF, TiffCloser>;

bool has_signature(const std::filesystem::path& path, std::string_view sig) {
    std::ifstream in(path, std::ios::binary);
    std::string head(sig.size(), '\0');
    in.read(head.data(), static_cast<std::streamsize>(head.size()));
    return in && head == sig;
}

GrayImage load_png(const std::filesystem::path& path) {
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&image, path.c_str()))
        throw ImageIoError(path.string() + ": " + image.message);
    const bool grey = (image.format & PNG_FORMAT_FLAG_COLOR) == 0;
    image.format = grey ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;
    std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
        const std::string msg = image.message;
        png_image_free(&image);
        throw ImageIoError(path.string() + ": " + msg);
    }
    const int w = static_cast<int>(image.width);
    const int h = static_cast<int>(image.height);
    if (grey) return GrayImage(w, h, std::move(buffer));
    GrayImage out(w, h);
    auto px = out.pixels();
    for (std::size_t i = 0; i < px.size(); ++i)
        px[i] = luma(buffer[3 * i], buffer[3 * i + 1], buffer[3 * i + 2]);
    return out;
}

GrayImage load_tiff(const std::filesystem::path& path) {
    TIFFSetErrorHandler(nullptr);
    TIFFSetWarningHandler(nullptr);
    Tiff tif(TIFFOpen(path.c_str(), "r"));
    if (!tif) throw ImageIoError(path.string() + ": cannot open TIFF");
    std::uint32_t w = 0, h = 0;
    std::uint16_t spp = 1, bps = 8, photometric = PHOTOMETRIC_MINISBLACK;
    TIFFGetField(tif.get(), TIFFTAG_IMAGEWIDTH, &w);
    TIFFGetField(tif.get(), TIFFTAG_IMAGELENGTH, &h);
    TIFFGetFieldDefaulted(tif.get(), TIFFTAG_SAMPLESPERPIXEL, &spp);
    TIFFGetFieldDefaulted(tif.get(), TIFFTAG_BITSPERSAMPLE, &bps);
    TIFFGetFieldDefaulted(tif.get(), TIFFTAG_PHOTOMETRIC, &photometric);
    if (w == 0 || h == 0) throw ImageIoError(path.string() + ": empty TIFF");

    GrayImage out(static_cast<int>(w), static_cast<int>(h));
    if (bps == 8 && spp == 1 &&
        (photometric == PHOTOMETRIC_MINISBLACK || photometric == PHOTOMETRIC_MINISWHITE) &&
        !TIFFIsTiled(tif.get())) {
        for (std::uint32_t y = 0; y < h; ++y) {
            auto row = out.row(static_cast<int>(y));
            if (TIFFReadScanline(tif.get(), row.data(), y, 0) < 0)
                throw ImageIoError(path.string() + ": bad scanline " + std::to_string(y));
            if (photometric == PHOTOMETRIC_MINISWHITE)
                for (auto& v : row) v = static_cast<std::uint8_t>(255 - v);
        }
        return out;
    }
    // Anything else goes through libtiff's RGBA conversion.
    std::vector<std::uint32_t> raster(static_cast<std::size_t>(w) * h);
    if (!TIFFReadRGBAImageOriented(tif.get(), w, h, raster.data(), ORIENTATION_TOPLEFT, 0))
        throw ImageIoError(path.string() + ": unsupported TIFF layout");
    auto px = out.pixels();
    for (std::size_t i = 0; i < px.size(); ++i)
        px[i] = luma(static_cast<std::uint8_t>(TIFFGetR(raster[i])),
                     static_cast<std::uint8_t>(TIFFGetG(raster[i])),
                     static_cast<std::uint8_t>(TIFFGetB(raster[i])));
    return out;
}

void write_png(int w, int h, std::uint32_t format, const std::uint8_t* data,
               const std::filesystem::path& path) {
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(w);
    image.height = static_cast<png_uint_32>(h);
    image.format = format;
    if (!png_image_write_to_file(&image, path.c_str(), 0, data, 0, nullptr))
        throw ImageIoError(path.string() + ": " + image.message);
}

}  // namespace

GrayImage load_image(const std::filesystem::path& path) {
    if (!std::filesystem::is_regular_file(path))
        throw ImageIoError(path.string() + ": not a readable file");
    using namespace std::string_view_literals;
    if (has_signature(path, "\x89PNG"sv)) return load_png(path);
    if (has_signature(path, "II*\0"sv) || has_signature(path, "MM\0*"sv)) return load_tiff(path);
    throw ImageIoError(path.string() + ": unsupported format (PNG or TIFF expected)");
}

void save_png(const GrayImage& img, const std::filesystem::path& path) {
    if (img.empty()) throw ImageIoError("cannot write an empty image");
    write_png(img.width(), img.height(), PNG_FORMAT_GRAY, img.pixels().data(), path);
}

void save_png(const BinaryImage& img, const std::filesystem::path& path) {
    GrayImage grey(img.width(), img.height());
    for (std::size_t i = 0; i < img.size(); ++i) grey.pixels()[i] = img.pixels()[i] ? 0 : 255;
    save_png(grey, path);
}

void save_png_rgb(int width, int height, const std::vector<std::uint8_t>& rgb,
                  const std::filesystem::path& path) {
    if (rgb.size() != static_cast<std::size_t>(width) * height * 3)
        throw ImageIoError("RGB buffer size mismatch");
    write_png(width, height, PNG_FORMAT_RGB, rgb.data(), path);
}

void save_tiff(const GrayImage& img, const std::filesystem::path& path) {
    Tiff tif(TIFFOpen(path.c_str(), "w"));
    if (!tif) throw ImageIoError(path.string() + ": cannot create TIFF");
    TIFFSetField(tif.get(), TIFFTAG_IMAGEWIDTH, static_cast<std::uint32_t>(img.width()));
    TIFFSetField(tif.get(), TIFFTAG_IMAGELENGTH, static_cast<std::uint32_t>(img.height()));
    TIFFSetField(tif.get(), TIFFTAG_SAMPLESPERPIXEL, 1);
    TIFFSetField(tif.get(), TIFFTAG_BITSPERSAMPLE, 8);
    TIFFSetField(tif.get(), TIFFTAG_PHOTOMETRIC, PHOTOMETRIC_MINISBLACK);
    TIFFSetField(tif.get(), TIFFTAG_PLANARCONFIG, PLANARCONFIG_CONTIG);
    TIFFSetField(tif.get(), TIFFTAG_ROWSPERSTRIP, 1);
    for (int y = 0; y < img.height(); ++y) {
        std::vector<std::uint8_t> row(img.row(y).begin(), img.row(y).end());
        if (TIFFWriteScanline(tif.get(), row.data(), static_cast<std::uint32_t>(y), 0) < 0)
            throw ImageIoError(path.string() + ": write failed");
    }
}

}  // namespace dictscan
