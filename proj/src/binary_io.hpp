#pragma once

// Little-endian byte buffers shared by the index and embedding file formats.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace specdim::detail {

using Bytes = std::vector<std::uint8_t>;

std::uint32_t crc32(std::span<const std::uint8_t> bytes);

class ByteWriter {
 public:
  void u8(std::uint8_t v) { buf_.push_back(v); }
  void u16(std::uint16_t v) { put_le(v, 2); }
  void u32(std::uint32_t v) { put_le(v, 4); }
  void u64(std::uint64_t v) { put_le(v, 8); }
  void f32(float v);
  void raw(std::string_view s) { buf_.insert(buf_.end(), s.begin(), s.end()); }
  // u16 length prefix followed by the bytes; throws ValidationError past 65535 bytes.
  void short_string(std::string_view s, std::string_view field);
  // Appends the CRC32 of everything written so far.
  void seal() { u32(crc32(buf_)); }

  const Bytes& bytes() const { return buf_; }

 private:
  void put_le(std::uint64_t v, int width) {
    for (int i = 0; i < width; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }

  Bytes buf_;
};

// Bounds-checked reader; running past the end throws TruncatedFileError.
class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint8_t u8() { return static_cast<std::uint8_t>(get_le(1)); }
  std::uint16_t u16() { return static_cast<std::uint16_t>(get_le(2)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(get_le(4)); }
  std::uint64_t u64() { return get_le(8); }
  float f32();
  std::string short_string();
  std::string_view raw(std::size_t n);

  std::size_t position() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void need(std::size_t n) const;
  std::uint64_t get_le(int width);

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

Bytes read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

// Verifies the magic, then that the trailing CRC32 matches the rest of the file.
// Magic is checked first so a wrong file type is never reported as corruption.
void check_magic(std::span<const std::uint8_t> bytes, std::string_view magic, std::string_view what);
void check_crc(std::span<const std::uint8_t> bytes, std::size_t payload_end, std::string_view what);

}  // namespace specdim::detail
