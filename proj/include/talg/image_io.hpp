#pragma once

#include <png.h>
#include <zlib.h>

#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <vector>

#include "talg/dense_array.hpp"

namespace talg {

namespace detail {

inline int next_pnm_token(std::istream& in, std::string& tok) {
  tok.clear();
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) return 1;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  return tok.empty() ? 0 : 1;
}

inline long parse_pnm_int(std::istream& in, const char* what) {
  std::string tok;
  if (!next_pnm_token(in, tok)) throw DataError(std::string("missing ") + what + " in image header");
  char* end = nullptr;
  long v = std::strtol(tok.c_str(), &end, 10);
  if (end == tok.c_str() || *end != '\0' || v < 0) throw DataError(std::string("bad ") + what + " in image header");
  return v;
}

}  // namespace detail

// Loads a P5 (binary) or P2 (ascii) graymap as a (rows, cols) array of raw
// sample values. maxval_out reports the header's peak sample value.
inline DenseArray load_pgm(const std::string& path, double* maxval_out = nullptr) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open: " + path);
  std::string magic;
  if (!detail::next_pnm_token(in, magic) || (magic != "P5" && magic != "P2"))
    throw DataError("not a P2/P5 graymap: " + path);
  const long w = detail::parse_pnm_int(in, "width");
  const long h = detail::parse_pnm_int(in, "height");
  const long maxval = detail::parse_pnm_int(in, "maxval");
  if (w < 1 || h < 1 || maxval < 1 || maxval > 65535) throw DataError("bad graymap header: " + path);
  DenseArray img({static_cast<int>(h), static_cast<int>(w)});
  if (magic == "P2") {
    for (std::int64_t i = 0; i < img.size(); ++i) img[i] = cplx(double(detail::parse_pnm_int(in, "sample")), 0.0);
  } else {
    const int bytes = maxval > 255 ? 2 : 1;
    std::vector<unsigned char> buf(static_cast<std::size_t>(img.size()) * bytes);
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (!in) throw DataError("truncated pixel data: " + path);
    for (std::int64_t i = 0; i < img.size(); ++i) {
      const double v = bytes == 1 ? double(buf[i]) : double((unsigned(buf[2 * i]) << 8) | buf[2 * i + 1]);
      img[i] = cplx(v, 0.0);
    }
  }
  if (maxval_out) *maxval_out = double(maxval);
  return img;
}

// Writes an 8-bit binary graymap; values are rounded and clamped to [0, 255].
inline void save_pgm(const std::string& path, const DenseArray& img, double real_tol = 1e-8) {
  if (img.order() != 2) throw ConfigError("graymap export requires a (rows, cols) array");
  const std::vector<double> vals = img.to_real(real_tol);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open for writing: " + path);
  out << "P5\n" << img.dims()[1] << " " << img.dims()[0] << "\n255\n";
  for (double v : vals) {
    const long r = std::lround(v);
    out.put(static_cast<char>(r < 0 ? 0 : (r > 255 ? 255 : r)));
  }
  if (!out) throw DataError("write failed: " + path);
}

// Loads a PNG as raw sample values: (rows, cols) for grayscale, else
// (rows, cols, 3). Palette images are expanded, alpha is dropped, 16-bit
// samples are kept at full scale. maxval_out reports 255 or 65535.
inline DenseArray load_png(const std::string& path, double* maxval_out = nullptr) {
  std::FILE* fp = std::fopen(path.c_str(), "rb");
  if (!fp) throw DataError("cannot open: " + path);
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    if (png) png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);
    throw DataError("png reader initialization failed");
  }
  std::vector<png_bytep> row_ptrs;
  std::vector<unsigned char> pixels;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);
    throw DataError("corrupt png: " + path);
  }
  png_init_io(png, fp);
  png_read_info(png, info);
  const png_uint_32 w = png_get_image_width(png, info);
  const png_uint_32 h = png_get_image_height(png, info);
  const int color = png_get_color_type(png, info);
  int depth = png_get_bit_depth(png, info);

  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  png_set_strip_alpha(png);
  png_read_update_info(png, info);
  depth = png_get_bit_depth(png, info);
  const int channels = png_get_channels(png, info);
  if (channels != 1 && channels != 3) {
    png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);
    throw DataError("unsupported png channel layout: " + path);
  }

  const std::size_t rowbytes = png_get_rowbytes(png, info);
  pixels.resize(rowbytes * h);
  row_ptrs.resize(h);
  for (png_uint_32 r = 0; r < h; ++r) row_ptrs[r] = pixels.data() + r * rowbytes;
  png_read_image(png, row_ptrs.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  std::fclose(fp);

  std::vector<int> dims = channels == 1 ? std::vector<int>{int(h), int(w)} : std::vector<int>{int(h), int(w), 3};
  DenseArray img(dims);
  const int bytes = depth == 16 ? 2 : 1;
  for (png_uint_32 r = 0; r < h; ++r) {
    const unsigned char* row = pixels.data() + r * rowbytes;
    for (png_uint_32 c = 0; c < w; ++c)
      for (int ch = 0; ch < channels; ++ch) {
        const std::size_t o = (static_cast<std::size_t>(c) * channels + ch) * bytes;
        const double v = bytes == 1 ? double(row[o]) : double((unsigned(row[o]) << 8) | row[o + 1]);
        img[(static_cast<std::int64_t>(r) * w + c) * channels + ch] = cplx(v, 0.0);
      }
  }
  if (maxval_out) *maxval_out = depth == 16 ? 65535.0 : 255.0;
  return img;
}

// Loads the first `count` records of a binary-format CIFAR-10 batch. Each
// image comes back channel-planar as a (3, 32, 32) array of 0..255 values.
inline std::vector<DenseArray> load_cifar10(const std::string& path, int count) {
  constexpr std::int64_t kRecord = 1 + 3 * 32 * 32;
  if (count < 1) throw ConfigError("record count must be positive");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open: " + path);
  in.seekg(0, std::ios::end);
  const std::int64_t bytes = in.tellg();
  in.seekg(0, std::ios::beg);
  if (bytes % kRecord != 0) throw DataError("file size is not a whole number of records: " + path);
  if (bytes / kRecord < count)
    throw DataError("file holds " + std::to_string(bytes / kRecord) + " records, need " + std::to_string(count));
  std::vector<DenseArray> images;
  images.reserve(count);
  std::vector<unsigned char> rec(kRecord);
  for (int i = 0; i < count; ++i) {
    in.read(reinterpret_cast<char*>(rec.data()), kRecord);
    if (!in) throw DataError("truncated record " + std::to_string(i) + ": " + path);
    DenseArray img({3, 32, 32});
    for (std::int64_t j = 0; j < 3 * 32 * 32; ++j) img[j] = cplx(double(rec[1 + j]), 0.0);
    images.push_back(std::move(img));
  }
  return images;
}

inline std::uint32_t crc32_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open: " + path);
  uLong crc = crc32(0L, Z_NULL, 0);
  char buf[1 << 16];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    crc = crc32(crc, reinterpret_cast<const Bytef*>(buf), static_cast<uInt>(in.gcount()));
    if (!in) break;
  }
  return static_cast<std::uint32_t>(crc);
}

}  // namespace talg
