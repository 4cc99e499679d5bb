#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "talg/dense_array.hpp"

namespace talg {

// Raw tensor container:
//   magic   "TALG1"            5 bytes
//   u8      endianness flag    0 = little endian (the only accepted value)
//   u8      scalar kind        0 = f64, 1 = complex f64 (interleaved re, im)
//   u32     order
//   u32[order] dimensions      t-scalar modes first, then structural modes
//   payload                    row-major, last index fastest
// All header integers and payload values are little endian.
inline constexpr char kRawTensorMagic[5] = {'T', 'A', 'L', 'G', '1'};

enum class RawScalarKind : std::uint8_t { F64 = 0, ComplexF64 = 1 };

namespace detail {

inline void write_u32(std::ostream& out, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v & 0xff), static_cast<unsigned char>((v >> 8) & 0xff),
                        static_cast<unsigned char>((v >> 16) & 0xff), static_cast<unsigned char>((v >> 24) & 0xff)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

inline std::uint32_t read_u32(std::istream& in, std::int64_t& offset, const std::string& what) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  if (!in) throw DataError("truncated " + what + " at byte " + std::to_string(offset));
  offset += 4;
  return std::uint32_t(b[0]) | (std::uint32_t(b[1]) << 8) | (std::uint32_t(b[2]) << 16) | (std::uint32_t(b[3]) << 24);
}

}  // namespace detail

inline void write_raw_tensor(const std::string& path, const DenseArray& arr,
                             RawScalarKind kind = RawScalarKind::ComplexF64, double real_tol = 1e-8) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open for writing: " + path);
  out.write(kRawTensorMagic, 5);
  out.put(0);  // little endian
  out.put(static_cast<char>(kind));
  detail::write_u32(out, static_cast<std::uint32_t>(arr.order()));
  for (int d : arr.dims()) detail::write_u32(out, static_cast<std::uint32_t>(d));
  if (kind == RawScalarKind::F64) {
    const std::vector<double> vals = arr.to_real(real_tol);
    out.write(reinterpret_cast<const char*>(vals.data()), static_cast<std::streamsize>(vals.size() * sizeof(double)));
  } else {
    for (std::int64_t i = 0; i < arr.size(); ++i) {
      const double re = arr[i].real(), im = arr[i].imag();
      out.write(reinterpret_cast<const char*>(&re), sizeof(double));
      out.write(reinterpret_cast<const char*>(&im), sizeof(double));
    }
  }
  if (!out) throw DataError("write failed: " + path);
}

inline DenseArray read_raw_tensor(const std::string& path, RawScalarKind* kind_out = nullptr) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open: " + path);
  std::int64_t offset = 0;
  char magic[5];
  in.read(magic, 5);
  if (!in || std::memcmp(magic, kRawTensorMagic, 5) != 0)
    throw DataError("bad magic at byte 0 of " + path);
  offset = 5;
  int endian = in.get();
  if (endian == EOF) throw DataError("truncated header at byte " + std::to_string(offset));
  if (endian != 0) throw DataError("unsupported endianness flag at byte " + std::to_string(offset));
  ++offset;
  int kind_raw = in.get();
  if (kind_raw == EOF) throw DataError("truncated header at byte " + std::to_string(offset));
  if (kind_raw != 0 && kind_raw != 1) throw DataError("unknown scalar kind at byte " + std::to_string(offset));
  ++offset;
  const std::uint32_t order = detail::read_u32(in, offset, "order field");
  if (order > 64) throw DataError("implausible order at byte " + std::to_string(offset - 4));
  std::vector<int> dims(order);
  for (std::uint32_t m = 0; m < order; ++m) {
    const std::uint32_t d = detail::read_u32(in, offset, "dimension field");
    if (d == 0 || d > (1u << 30)) throw DataError("invalid dimension at byte " + std::to_string(offset - 4));
    dims[m] = static_cast<int>(d);
  }
  DenseArray arr(dims);
  if (kind_raw == 0) {
    std::vector<double> vals(arr.size());
    in.read(reinterpret_cast<char*>(vals.data()), static_cast<std::streamsize>(vals.size() * sizeof(double)));
    if (!in) throw DataError("truncated payload at byte " + std::to_string(offset + in.gcount()));
    offset += static_cast<std::int64_t>(vals.size() * sizeof(double));
    for (std::int64_t i = 0; i < arr.size(); ++i) arr[i] = cplx(vals[i], 0.0);
  } else {
    std::vector<double> vals(static_cast<std::size_t>(arr.size()) * 2);
    in.read(reinterpret_cast<char*>(vals.data()), static_cast<std::streamsize>(vals.size() * sizeof(double)));
    if (!in) throw DataError("truncated payload at byte " + std::to_string(offset + in.gcount()));
    offset += static_cast<std::int64_t>(vals.size() * sizeof(double));
    for (std::int64_t i = 0; i < arr.size(); ++i) arr[i] = cplx(vals[2 * i], vals[2 * i + 1]);
  }
  char extra;
  if (in.read(&extra, 1)) throw DataError("trailing bytes after payload at byte " + std::to_string(offset));
  if (kind_out) *kind_out = static_cast<RawScalarKind>(kind_raw);
  return arr;
}

}  // namespace talg
