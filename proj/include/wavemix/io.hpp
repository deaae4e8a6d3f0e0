#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <png.h>

#include "wavemix/image.hpp"

namespace wavemix {

namespace io_detail {

inline std::uint8_t quantize_u8(double v) {
  const double q = std::lround(std::clamp(v, 0.0, 255.0));
  return static_cast<std::uint8_t>(q);
}

inline int pgm_next_token(std::istream& in, std::string& tok) {
  tok.clear();
  int ch = in.get();
  // skip whitespace and '#' comments
  while (ch != EOF) {
    if (ch == '#') {
      while (ch != EOF && ch != '\n') ch = in.get();
    } else if (std::isspace(ch)) {
      ch = in.get();
    } else {
      break;
    }
  }
  while (ch != EOF && !std::isspace(ch)) {
    tok.push_back(static_cast<char>(ch));
    ch = in.get();
  }
  return tok.empty() ? EOF : 0;
}

struct PngReadCloser {
  png_structp png = nullptr;
  png_infop info = nullptr;
  std::FILE* fp = nullptr;
  ~PngReadCloser() {
    if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
    if (fp) std::fclose(fp);
  }
};

struct PngWriteCloser {
  png_structp png = nullptr;
  png_infop info = nullptr;
  std::FILE* fp = nullptr;
  ~PngWriteCloser() {
    if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
    if (fp) std::fclose(fp);
  }
};

}  // namespace io_detail

/// Binary 8-bit PGM (P5).
inline Image read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_pgm: cannot open " + path);
  std::string tok;
  if (io_detail::pgm_next_token(in, tok) == EOF || tok != "P5")
    throw std::runtime_error("read_pgm: not a binary PGM (P5): " + path);
  long w = 0, h = 0, maxval = 0;
  auto next_long = [&](long& out) {
    if (io_detail::pgm_next_token(in, tok) == EOF)
      throw std::runtime_error("read_pgm: truncated header: " + path);
    out = std::stol(tok);
  };
  next_long(w);
  next_long(h);
  next_long(maxval);
  if (w < 1 || h < 1) throw std::runtime_error("read_pgm: bad dimensions: " + path);
  if (maxval < 1 || maxval > 255)
    throw std::runtime_error("read_pgm: only 8-bit PGM supported: " + path);
  // single whitespace byte already consumed by tokenizer
  std::vector<std::uint8_t> raw(static_cast<std::size_t>(w) * h);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (static_cast<std::size_t>(in.gcount()) != raw.size())
    throw std::runtime_error("read_pgm: truncated pixel data: " + path);
  Image img(static_cast<int>(w), static_cast<int>(h));
  for (std::size_t i = 0; i < raw.size(); ++i) img.data[i] = raw[i];
  return img;
}

inline void write_pgm(const Image& img, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_pgm: cannot open " + path);
  out << "P5\n" << img.width << " " << img.height << "\n255\n";
  std::vector<std::uint8_t> raw(img.size());
  for (std::size_t i = 0; i < raw.size(); ++i) raw[i] = io_detail::quantize_u8(img.data[i]);
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (!out) throw std::runtime_error("write_pgm: write failed: " + path);
}

/// 8-bit grayscale PNG. Color or palette inputs are rejected.
inline Image read_png(const std::string& path) {
  io_detail::PngReadCloser c;
  c.fp = std::fopen(path.c_str(), "rb");
  if (!c.fp) throw std::runtime_error("read_png: cannot open " + path);
  unsigned char sig[8];
  if (std::fread(sig, 1, 8, c.fp) != 8 || png_sig_cmp(sig, 0, 8))
    throw std::runtime_error("read_png: not a PNG file: " + path);
  c.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!c.png) throw std::runtime_error("read_png: out of memory");
  c.info = png_create_info_struct(c.png);
  if (!c.info) throw std::runtime_error("read_png: out of memory");
  if (setjmp(png_jmpbuf(c.png)))
    throw std::runtime_error("read_png: decode error: " + path);
  png_init_io(c.png, c.fp);
  png_set_sig_bytes(c.png, 8);
  png_read_info(c.png, c.info);

  const png_uint_32 w = png_get_image_width(c.png, c.info);
  const png_uint_32 h = png_get_image_height(c.png, c.info);
  const int color = png_get_color_type(c.png, c.info);
  const int depth = png_get_bit_depth(c.png, c.info);
  if (color != PNG_COLOR_TYPE_GRAY)
    throw std::runtime_error("read_png: image is not grayscale: " + path);
  if (depth < 8) png_set_expand_gray_1_2_4_to_8(c.png);
  if (depth == 16) png_set_strip_16(c.png);
  png_read_update_info(c.png, c.info);

  Image img(static_cast<int>(w), static_cast<int>(h));
  std::vector<std::uint8_t> row(w);
  for (png_uint_32 r = 0; r < h; ++r) {
    png_read_row(c.png, row.data(), nullptr);
    for (png_uint_32 cix = 0; cix < w; ++cix)
      img.at(static_cast<int>(r), static_cast<int>(cix)) = row[cix];
  }
  png_read_end(c.png, nullptr);
  return img;
}

inline void write_png(const Image& img, const std::string& path) {
  io_detail::PngWriteCloser c;
  c.fp = std::fopen(path.c_str(), "wb");
  if (!c.fp) throw std::runtime_error("write_png: cannot open " + path);
  c.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!c.png) throw std::runtime_error("write_png: out of memory");
  c.info = png_create_info_struct(c.png);
  if (!c.info) throw std::runtime_error("write_png: out of memory");
  if (setjmp(png_jmpbuf(c.png)))
    throw std::runtime_error("write_png: encode error: " + path);
  png_init_io(c.png, c.fp);
  png_set_IHDR(c.png, c.info, static_cast<png_uint_32>(img.width),
               static_cast<png_uint_32>(img.height), 8, PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(c.png, c.info);
  std::vector<std::uint8_t> row(static_cast<std::size_t>(img.width));
  for (int r = 0; r < img.height; ++r) {
    for (int cix = 0; cix < img.width; ++cix)
      row[static_cast<std::size_t>(cix)] = io_detail::quantize_u8(img.at(r, cix));
    png_write_row(c.png, row.data());
  }
  png_write_end(c.png, nullptr);
}

/// Raw debug dump: uint32 LE width, uint32 LE height, then row-major
/// float64 LE samples. Lossless, unclamped.
inline void write_raw_f64(const Image& img, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_raw_f64: cannot open " + path);
  const std::uint32_t dims[2] = {static_cast<std::uint32_t>(img.width),
                                 static_cast<std::uint32_t>(img.height)};
  out.write(reinterpret_cast<const char*>(dims), sizeof dims);
  out.write(reinterpret_cast<const char*>(img.data.data()),
            static_cast<std::streamsize>(img.size() * sizeof(double)));
  if (!out) throw std::runtime_error("write_raw_f64: write failed: " + path);
}

inline Image read_raw_f64(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_raw_f64: cannot open " + path);
  std::uint32_t dims[2];
  in.read(reinterpret_cast<char*>(dims), sizeof dims);
  if (!in || dims[0] < 1 || dims[1] < 1)
    throw std::runtime_error("read_raw_f64: bad header: " + path);
  Image img(static_cast<int>(dims[0]), static_cast<int>(dims[1]));
  in.read(reinterpret_cast<char*>(img.data.data()),
          static_cast<std::streamsize>(img.size() * sizeof(double)));
  if (static_cast<std::size_t>(in.gcount()) != img.size() * sizeof(double))
    throw std::runtime_error("read_raw_f64: truncated data: " + path);
  return img;
}

inline bool has_suffix(const std::string& s, const std::string& suf) {
  return s.size() >= suf.size() && s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
}

/// Dispatch by extension: .pgm, .png, .f64.
inline Image read_image(const std::string& path) {
  if (has_suffix(path, ".pgm")) return read_pgm(path);
  if (has_suffix(path, ".png")) return read_png(path);
  if (has_suffix(path, ".f64")) return read_raw_f64(path);
  throw std::runtime_error("read_image: unsupported extension: " + path);
}

inline void write_image(const Image& img, const std::string& path) {
  if (has_suffix(path, ".pgm")) return write_pgm(img, path);
  if (has_suffix(path, ".png")) return write_png(img, path);
  if (has_suffix(path, ".f64")) return write_raw_f64(img, path);
  throw std::runtime_error("write_image: unsupported extension: " + path);
}

}  // namespace wavemix
