#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string_view>

#include "qwoa/error.hpp"

namespace qwoa {

/// Little-endian binary writer for the debug dump formats.
class BinaryWriter {
public:
  explicit BinaryWriter(const std::filesystem::path& path)
      : path_(path.string()), out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw IoError("cannot open for writing " + path_);
  }

  void magic(std::string_view tag) { out_.write(tag.data(), static_cast<std::streamsize>(tag.size())); }

  void u64(std::uint64_t v) {
    unsigned char buf[8];
    for (int k = 0; k < 8; ++k) buf[k] = static_cast<unsigned char>(v >> (8 * k));
    out_.write(reinterpret_cast<const char*>(buf), 8);
  }

  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }

  void close() {
    out_.close();
    if (!out_) throw IoError("write failed: " + path_);
  }

private:
  std::string path_;
  std::ofstream out_;
};

class BinaryReader {
public:
  explicit BinaryReader(const std::filesystem::path& path)
      : path_(path.string()), in_(path, std::ios::binary) {
    if (!in_) throw IoError("cannot open " + path_);
  }

  void expect_magic(std::string_view tag) {
    std::string buf(tag.size(), '\0');
    in_.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!in_ || buf != tag) throw FormatError(path_ + ": bad magic, expected " + std::string(tag));
  }

  std::uint64_t u64() {
    unsigned char buf[8];
    in_.read(reinterpret_cast<char*>(buf), 8);
    if (!in_) throw FormatError(path_ + ": truncated");
    std::uint64_t v = 0;
    for (int k = 0; k < 8; ++k) v |= std::uint64_t{buf[k]} << (8 * k);
    return v;
  }

  double f64() { return std::bit_cast<double>(u64()); }

  void expect_end() {
    if (in_.peek() != std::char_traits<char>::eof()) throw FormatError(path_ + ": trailing bytes");
  }

private:
  std::string path_;
  std::ifstream in_;
};

} // namespace qwoa
