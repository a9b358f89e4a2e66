#include "binary_io.hpp"

#include <zlib.h>

#include <algorithm>
#include <bit>
#include <fstream>
#include <iterator>

#include "specdim/error.hpp"

namespace specdim::detail {

std::uint32_t crc32(std::span<const std::uint8_t> bytes) {
  uLong crc = ::crc32(0L, Z_NULL, 0);
  // zlib takes a uInt length; feed large buffers in pieces.
  constexpr std::size_t kChunk = 1u << 30;
  for (std::size_t off = 0; off < bytes.size(); off += kChunk) {
    const std::size_t len = std::min(kChunk, bytes.size() - off);
    crc = ::crc32(crc, bytes.data() + off, static_cast<uInt>(len));
  }
  return static_cast<std::uint32_t>(crc);
}

void ByteWriter::f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }

void ByteWriter::short_string(std::string_view s, std::string_view field) {
  if (s.size() > 0xFFFF) {
    throw ValidationError(std::string(field) + " is " + std::to_string(s.size()) +
                          " bytes; the file format allows at most 65535");
  }
  u16(static_cast<std::uint16_t>(s.size()));
  raw(s);
}

void ByteReader::need(std::size_t n) const {
  if (remaining() < n) {
    throw TruncatedFileError("unexpected end of file at byte " + std::to_string(pos_) + " (needed " +
                             std::to_string(n) + " more)");
  }
}

std::uint64_t ByteReader::get_le(int width) {
  need(static_cast<std::size_t>(width));
  std::uint64_t v = 0;
  for (int i = 0; i < width; ++i) v |= static_cast<std::uint64_t>(bytes_[pos_ + i]) << (8 * i);
  pos_ += static_cast<std::size_t>(width);
  return v;
}

float ByteReader::f32() { return std::bit_cast<float>(u32()); }

std::string_view ByteReader::raw(std::size_t n) {
  need(n);
  std::string_view out(reinterpret_cast<const char*>(bytes_.data() + pos_), n);
  pos_ += n;
  return out;
}

std::string ByteReader::short_string() {
  const std::size_t len = u16();
  return std::string(raw(len));
}

Bytes read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  Bytes bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("error while reading '" + path.string() + "'");
  return bytes;
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("error while writing '" + path.string() + "'");
}

void check_magic(std::span<const std::uint8_t> bytes, std::string_view magic, std::string_view what) {
  if (bytes.size() < magic.size()) {
    throw TruncatedFileError(std::string(what) + ": file is too short to hold a header");
  }
  if (!std::equal(magic.begin(), magic.end(), bytes.begin())) {
    throw MagicMismatchError(std::string(what) + ": bad magic bytes (expected '" + std::string(magic) + "')");
  }
}

void check_crc(std::span<const std::uint8_t> bytes, std::size_t payload_end, std::string_view what) {
  ByteReader tail(bytes.subspan(payload_end));
  const std::uint32_t stored = tail.u32();
  if (tail.remaining() != 0) {
    throw FormatError(std::string(what) + ": " + std::to_string(tail.remaining()) +
                      " unexpected bytes after the checksum");
  }
  const std::uint32_t actual = crc32(bytes.first(payload_end));
  if (stored != actual) throw ChecksumError(std::string(what) + ": CRC32 mismatch, file is corrupted");
}

}  // namespace specdim::detail
