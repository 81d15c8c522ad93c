/* Copyright 2026 The ActionPipe Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef ACTIONPIPE_BINARY_IO_HPP_
#define ACTIONPIPE_BINARY_IO_HPP_

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "actionpipe/error.hpp"

namespace actionpipe::io {

static_assert(std::endian::native == std::endian::little,
              "on-disk formats are little-endian; big-endian hosts need byte swapping");

// Little-endian stream writer for the fixed binary containers.
class BinaryWriter {
 public:
  explicit BinaryWriter(const std::filesystem::path& path)
      : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw IoError("cannot open for writing: " + path.string());
  }

  void magic(std::string_view tag) { bytes(tag.data(), tag.size()); }

  template <typename T>
  void put(T value) {
    static_assert(std::is_arithmetic_v<T>);
    bytes(&value, sizeof(T));
  }

  template <typename T>
  void put_array(const T* values, size_t count) {
    static_assert(std::is_arithmetic_v<T>);
    bytes(values, sizeof(T) * count);
  }

  void bytes(const void* data, size_t size) {
    out_.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
    if (!out_) throw IoError("write failed: " + path_.string());
  }

  void close() {
    out_.close();
    if (!out_) throw IoError("close failed: " + path_.string());
  }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

// Little-endian reader. All reads are bounds-checked against the file size.
class BinaryReader {
 public:
  explicit BinaryReader(const std::filesystem::path& path) : path_(path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path.string());
    buffer_.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }

  void expect_magic(std::string_view tag) {
    std::string found(tag.size(), '\0');
    bytes(found.data(), found.size());
    if (found != tag) throw FormatError(path_.string() + ": bad magic, expected " + std::string(tag));
  }

  template <typename T>
  T get() {
    static_assert(std::is_arithmetic_v<T>);
    T value;
    bytes(&value, sizeof(T));
    return value;
  }

  template <typename T>
  void get_array(T* values, size_t count) {
    static_assert(std::is_arithmetic_v<T>);
    bytes(values, sizeof(T) * count);
  }

  std::string get_string(size_t length) {
    std::string s(length, '\0');
    bytes(s.data(), length);
    return s;
  }

  void bytes(void* dst, size_t size) {
    if (size > buffer_.size() - pos_) throw FormatError(path_.string() + ": truncated file");
    std::memcpy(dst, buffer_.data() + pos_, size);
    pos_ += size;
  }

  size_t remaining() const { return buffer_.size() - pos_; }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::vector<char> buffer_;
  size_t pos_ = 0;
};

}  // namespace actionpipe::io

#endif  // ACTIONPIPE_BINARY_IO_HPP_
