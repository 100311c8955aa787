#include "uwdepth/io.hpp"

#include <png.h>

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>
#include <vector>

namespace uwd {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

[[noreturn]] void png_error_fn(png_structp png, png_const_charp msg) {
  throw InputError(std::string("png: ") + msg);
}

void png_warning_fn(png_structp, png_const_charp) {}

}  // namespace

ImageBuffer load_image(const std::string& path) {
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) throw InputError("cannot open image file: " + path);

  png_byte header[8];
  if (std::fread(header, 1, 8, fp.get()) != 8 || png_sig_cmp(header, 0, 8))
    throw InputError("not a PNG file: " + path);

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr,
                                           png_error_fn, png_warning_fn);
  if (!png) throw InputError("png reader allocation failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw InputError("png info allocation failed");
  }

  try {
    png_init_io(png, fp.get());
    png_set_sig_bytes(png, 8);
    png_read_info(png, info);

    const png_uint_32 w = png_get_image_width(png, info);
    const png_uint_32 h = png_get_image_height(png, info);
    const int bit_depth = png_get_bit_depth(png, info);
    const int color_type = png_get_color_type(png, info);

    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8)
      png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    png_set_strip_alpha(png);
    png_read_update_info(png, info);

    const int out_depth = png_get_bit_depth(png, info);
    const int out_channels = png_get_channels(png, info);
    if (out_depth != 8 && out_depth != 16)
      throw InputError("unsupported PNG bit depth: " + path);
    if (out_channels != 1 && out_channels != 3)
      throw InputError("unsupported PNG channel count: " + path);

    const std::size_t row_bytes = png_get_rowbytes(png, info);
    std::vector<png_byte> rows(static_cast<std::size_t>(h) * row_bytes);
    std::vector<png_bytep> row_ptrs(h);
    for (png_uint_32 r = 0; r < h; ++r) row_ptrs[r] = rows.data() + r * row_bytes;
    png_read_image(png, row_ptrs.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    ImageBuffer img(static_cast<int>(h), static_cast<int>(w), out_channels);
    const double scale =
        out_depth == 8 ? 1.0 / 255.0 : 1.0 / 65535.0;
    for (png_uint_32 y = 0; y < h; ++y) {
      const png_byte* row = rows.data() + y * row_bytes;
      for (png_uint_32 x = 0; x < w * static_cast<png_uint_32>(out_channels);
           ++x) {
        double value;
        if (out_depth == 8) {
          value = row[x] * scale;
        } else {
          // PNG stores 16-bit samples big-endian.
          value = ((static_cast<unsigned>(row[2 * x]) << 8) | row[2 * x + 1]) *
                  scale;
        }
        img.data[static_cast<std::size_t>(y) * w * out_channels + x] = value;
      }
    }
    return img;
  } catch (...) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw;
  }
}

void save_image(const ImageBuffer& img, const std::string& path,
                int bit_depth) {
  if (bit_depth != 8 && bit_depth != 16)
    throw InputError("save_image supports bit depths 8 and 16");

  FilePtr fp(std::fopen(path.c_str(), "wb"));
  if (!fp) throw InputError("cannot open image file for writing: " + path);

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr,
                                            png_error_fn, png_warning_fn);
  if (!png) throw InputError("png writer allocation failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw InputError("png info allocation failed");
  }

  try {
    png_init_io(png, fp.get());
    const int color_type =
        img.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB;
    png_set_IHDR(png, info, img.width, img.height, bit_depth, color_type,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    const double maxval = bit_depth == 8 ? 255.0 : 65535.0;
    const std::size_t samples_per_row =
        static_cast<std::size_t>(img.width) * img.channels;
    std::vector<png_byte> row(samples_per_row * (bit_depth / 8));
    for (int y = 0; y < img.height; ++y) {
      for (std::size_t x = 0; x < samples_per_row; ++x) {
        const double v = clamp01(img.data[y * samples_per_row + x]);
        const unsigned q = static_cast<unsigned>(std::lround(v * maxval));
        if (bit_depth == 8) {
          row[x] = static_cast<png_byte>(q);
        } else {
          row[2 * x] = static_cast<png_byte>(q >> 8);
          row[2 * x + 1] = static_cast<png_byte>(q & 0xff);
        }
      }
      png_write_row(png, row.data());
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
  } catch (...) {
    png_destroy_write_struct(&png, &info);
    throw;
  }
}

namespace {

// Reads one whitespace-delimited token, skipping PFM '#' comments.
std::string next_token(std::istream& in) {
  std::string tok;
  char c;
  while (in.get(c)) {
    if (c == '#') {
      std::string skip;
      std::getline(in, skip);
      continue;
    }
    if (!std::isspace(static_cast<unsigned char>(c))) {
      tok.push_back(c);
      while (in.get(c) && !std::isspace(static_cast<unsigned char>(c)))
        tok.push_back(c);
      break;
    }
  }
  return tok;
}

float swap_float(float v) {
  std::uint32_t u;
  std::memcpy(&u, &v, 4);
  u = ((u & 0x000000ffu) << 24) | ((u & 0x0000ff00u) << 8) |
      ((u & 0x00ff0000u) >> 8) | ((u & 0xff000000u) >> 24);
  std::memcpy(&v, &u, 4);
  return v;
}

constexpr bool host_is_little_endian() {
  return std::endian::native == std::endian::little;
}

}  // namespace

DepthMap load_depth(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open depth file: " + path);

  const std::string magic = next_token(in);
  if (magic != "Pf")
    throw InputError("depth file is not single-channel PFM: " + path);

  int w = 0, h = 0;
  double scale = 0.0;
  try {
    w = std::stoi(next_token(in));
    h = std::stoi(next_token(in));
    scale = std::stod(next_token(in));
  } catch (const std::exception&) {
    throw InputError("malformed PFM header: " + path);
  }
  if (w < 1 || h < 1 || scale == 0.0)
    throw InputError("malformed PFM header: " + path);
  const bool file_little = scale < 0.0;

  std::vector<float> raw(static_cast<std::size_t>(w) * h);
  in.read(reinterpret_cast<char*>(raw.data()),
          static_cast<std::streamsize>(raw.size() * sizeof(float)));
  if (in.gcount() != static_cast<std::streamsize>(raw.size() * sizeof(float)))
    throw InputError("PFM data truncated relative to declared size: " + path);

  DepthMap depth(h, w);
  for (int y = 0; y < h; ++y) {
    // PFM rows run bottom-up.
    const int src_row = h - 1 - y;
    for (int x = 0; x < w; ++x) {
      float v = raw[static_cast<std::size_t>(src_row) * w + x];
      if (file_little != host_is_little_endian()) v = swap_float(v);
      depth.set(y, x, static_cast<double>(v));
    }
  }
  return depth;
}

void save_depth(const DepthMap& depth, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open depth file for writing: " + path);

  out << "Pf\n" << depth.width << " " << depth.height << "\n-1.0\n";
  std::vector<float> row(depth.width);
  for (int y = depth.height - 1; y >= 0; --y) {
    for (int x = 0; x < depth.width; ++x) {
      float v = depth.valid(y, x) ? static_cast<float>(depth.at(y, x)) : 0.0f;
      if (!host_is_little_endian()) v = swap_float(v);
      row[x] = v;
    }
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(row.size() * sizeof(float)));
  }
  if (!out) throw InputError("failed writing depth file: " + path);
}

}  // namespace uwd
