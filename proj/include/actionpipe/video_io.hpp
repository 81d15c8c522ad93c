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

// Video containers on disk: the raw "ARGV" tensor file and directories of
// numbered PNG frames.
//
// ARGV layout (little-endian):
//   "ARGV", u16 version=1, u32 t, u32 rows, u32 cols, u8 channels (1..3),
//   u8 dtype (0 = u8, 1 = f32), then samples frame by frame.
// One- and three-channel payloads are row-major with interleaved channels.
// Two-channel (flow) payloads are planar per frame: the u plane, then v.

#ifndef ACTIONPIPE_VIDEO_IO_HPP_
#define ACTIONPIPE_VIDEO_IO_HPP_

#include <png.h>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <regex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "actionpipe/binary_io.hpp"
#include "actionpipe/error.hpp"
#include "actionpipe/flow.hpp"
#include "actionpipe/video.hpp"

namespace actionpipe {

enum class SampleType : uint8_t { U8 = 0, F32 = 1 };

struct ArgvHeader {
  size_t frames = 0, rows = 0, cols = 0, channels = 0;
  SampleType dtype = SampleType::U8;
};

namespace argv_detail {

inline void write_header(io::BinaryWriter& w, const ArgvHeader& h) {
  detail::require(h.channels >= 1 && h.channels <= 3, "ARGV supports 1 to 3 channels");
  w.magic("ARGV");
  w.put<uint16_t>(1);
  w.put<uint32_t>(static_cast<uint32_t>(h.frames));
  w.put<uint32_t>(static_cast<uint32_t>(h.rows));
  w.put<uint32_t>(static_cast<uint32_t>(h.cols));
  w.put<uint8_t>(static_cast<uint8_t>(h.channels));
  w.put<uint8_t>(static_cast<uint8_t>(h.dtype));
}

inline ArgvHeader read_header(io::BinaryReader& r) {
  r.expect_magic("ARGV");
  if (const auto version = r.get<uint16_t>(); version != 1)
    throw FormatError(r.path().string() + ": unsupported ARGV version " + std::to_string(version));
  ArgvHeader h;
  h.frames = r.get<uint32_t>();
  h.rows = r.get<uint32_t>();
  h.cols = r.get<uint32_t>();
  h.channels = r.get<uint8_t>();
  const auto dtype = r.get<uint8_t>();
  if (h.channels < 1 || h.channels > 3) throw FormatError(r.path().string() + ": bad channel count");
  if (dtype > 1) throw FormatError(r.path().string() + ": bad dtype");
  h.dtype = static_cast<SampleType>(dtype);
  const size_t bytes = h.frames * h.rows * h.cols * h.channels * (h.dtype == SampleType::U8 ? 1 : 4);
  if (r.remaining() != bytes) throw FormatError(r.path().string() + ": payload size does not match header");
  return h;
}

// Interleaved <-> planar for one frame.
template <typename T>
std::vector<T> to_planar(std::span<const T> frame, size_t channels) {
  const size_t px = frame.size() / channels;
  std::vector<T> out(frame.size());
  for (size_t i = 0; i < px; ++i)
    for (size_t k = 0; k < channels; ++k) out[k * px + i] = frame[i * channels + k];
  return out;
}

template <typename T>
void from_planar(const std::vector<T>& planar, std::span<T> frame, size_t channels) {
  const size_t px = frame.size() / channels;
  for (size_t i = 0; i < px; ++i)
    for (size_t k = 0; k < channels; ++k) frame[i * channels + k] = planar[k * px + i];
}

template <typename T>
void write_payload(io::BinaryWriter& w, const Video<T>& video) {
  if (video.channels() != 2) {
    w.put_array(video.data().data(), video.data().size());
    return;
  }
  for (size_t t = 0; t < video.frames(); ++t) {
    const auto planar = to_planar<T>(video.frame(t), 2);
    w.put_array(planar.data(), planar.size());
  }
}

template <typename T>
Video<T> read_payload(io::BinaryReader& r, const ArgvHeader& h) {
  Video<T> video(h.frames, h.rows, h.cols, h.channels);
  if (h.channels != 2) {
    r.get_array(video.data().data(), video.data().size());
    return video;
  }
  std::vector<T> planar(video.frame_size());
  for (size_t t = 0; t < h.frames; ++t) {
    r.get_array(planar.data(), planar.size());
    from_planar<T>(planar, video.frame(t), 2);
  }
  return video;
}

}  // namespace argv_detail

inline void write_argv(const Video<uint8_t>& video, const std::filesystem::path& path) {
  io::BinaryWriter w(path);
  argv_detail::write_header(w, {video.frames(), video.rows(), video.cols(), video.channels(), SampleType::U8});
  argv_detail::write_payload(w, video);
  w.close();
}

inline void write_argv(const Video<float>& video, const std::filesystem::path& path) {
  io::BinaryWriter w(path);
  argv_detail::write_header(w, {video.frames(), video.rows(), video.cols(), video.channels(), SampleType::F32});
  argv_detail::write_payload(w, video);
  w.close();
}

inline ArgvHeader read_argv_header(const std::filesystem::path& path) {
  io::BinaryReader r(path);
  return argv_detail::read_header(r);
}

// Reads any ARGV file as floats (u8 payloads are widened, not rescaled).
inline Video<float> read_argv_f32(const std::filesystem::path& path, ArgvHeader* header = nullptr) {
  io::BinaryReader r(path);
  const ArgvHeader h = argv_detail::read_header(r);
  if (header) *header = h;
  if (h.dtype == SampleType::F32) return argv_detail::read_payload<float>(r, h);
  const Video<uint8_t> raw = argv_detail::read_payload<uint8_t>(r, h);
  return Video<float>(h.frames, h.rows, h.cols, h.channels, std::vector<float>(raw.data().begin(), raw.data().end()));
}

inline Video<uint8_t> read_argv_u8(const std::filesystem::path& path) {
  io::BinaryReader r(path);
  const ArgvHeader h = argv_detail::read_header(r);
  if (h.dtype != SampleType::U8) throw FormatError(path.string() + ": expected u8 samples");
  return argv_detail::read_payload<uint8_t>(r, h);
}

inline void write_flow(const FlowVideo& flow, const std::filesystem::path& path) { write_argv(to_video(flow), path); }

inline FlowVideo read_flow(const std::filesystem::path& path) {
  ArgvHeader h;
  Video<float> v = read_argv_f32(path, &h);
  if (h.channels != 2 || h.dtype != SampleType::F32) throw FormatError(path.string() + ": not a 2-channel f32 flow file");
  return flow_from_video(v);
}

// PNG frames -----------------------------------------------------------------

inline void write_png(const std::filesystem::path& path, std::span<const uint8_t> rgb, size_t rows, size_t cols) {
  detail::require(rgb.size() == rows * cols * 3, "PNG payload must be rows*cols*3 bytes");
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(cols);
  image.height = static_cast<png_uint_32>(rows);
  image.format = PNG_FORMAT_RGB;
  if (!png_image_write_to_file(&image, path.c_str(), 0, rgb.data(), 0, nullptr))
    throw IoError("cannot write PNG " + path.string() + ": " + image.message);
}

inline std::vector<uint8_t> read_png(const std::filesystem::path& path, size_t& rows, size_t& cols) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str()))
    throw IoError("cannot read PNG " + path.string() + ": " + image.message);
  image.format = PNG_FORMAT_RGB;
  std::vector<uint8_t> buffer(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
    png_image_free(&image);
    throw IoError("cannot decode PNG " + path.string() + ": " + image.message);
  }
  rows = image.height;
  cols = image.width;
  return buffer;
}

// Frames named frame_<n>.png, ordered by n.
inline std::vector<std::filesystem::path> list_png_frames(const std::filesystem::path& dir) {
  static const std::regex pattern(R"(frame_(\d+)\.png)");
  std::vector<std::pair<unsigned long long, std::filesystem::path>> found;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    std::smatch m;
    const std::string name = entry.path().filename().string();
    if (entry.is_regular_file() && std::regex_match(name, m, pattern)) found.emplace_back(std::stoull(m[1]), entry.path());
  }
  std::sort(found.begin(), found.end());
  std::vector<std::filesystem::path> out;
  for (auto& f : found) out.push_back(std::move(f.second));
  return out;
}

inline Video<uint8_t> read_png_frames(const std::filesystem::path& dir) {
  const auto frames = list_png_frames(dir);
  if (frames.empty()) throw IoError("no frame_*.png files in " + dir.string());
  size_t rows = 0, cols = 0;
  std::vector<uint8_t> first = read_png(frames.front(), rows, cols);
  Video<uint8_t> video(frames.size(), rows, cols, 3);
  std::copy(first.begin(), first.end(), video.frame(0).begin());
  for (size_t t = 1; t < frames.size(); ++t) {
    size_t r = 0, c = 0;
    const std::vector<uint8_t> px = read_png(frames[t], r, c);
    if (r != rows || c != cols) throw FormatError(frames[t].string() + ": frame size differs from the first frame");
    std::copy(px.begin(), px.end(), video.frame(t).begin());
  }
  return video;
}

inline void write_png_frames(const Video<uint8_t>& video, const std::filesystem::path& dir) {
  detail::require(video.channels() == 3, "PNG frames need RGB video");
  std::filesystem::create_directories(dir);
  for (size_t t = 0; t < video.frames(); ++t) {
    char name[32];
    std::snprintf(name, sizeof(name), "frame_%06zu.png", t);
    write_png(dir / name, video.frame(t), video.rows(), video.cols());
  }
}

// Loads an RGB clip from a PNG directory or an ARGV file. Gray ARGV input is
// replicated to three channels; f32 input is taken to be in the unit interval.
inline RgbVideo load_rgb_video(const std::filesystem::path& path) {
  if (std::filesystem::is_directory(path)) return make_rgb_video(read_png_frames(path));
  ArgvHeader h;
  Video<float> v = read_argv_f32(path, &h);
  if (h.channels == 2) throw FormatError(path.string() + ": 2-channel file is a flow video, not RGB");
  if (h.channels == 1) {
    Video<float> rgb(v.frames(), v.rows(), v.cols(), 3);
    for (size_t i = 0; i < v.data().size(); ++i)
      for (size_t k = 0; k < 3; ++k) rgb.data()[3 * i + k] = v.data()[i];
    v = std::move(rgb);
  }
  detail::require(v.frames() >= 1, "video has no frames");
  return {std::move(v), h.dtype == SampleType::U8 ? ValueDomain::Raw8 : ValueDomain::Unit};
}

}  // namespace actionpipe

#endif  // ACTIONPIPE_VIDEO_IO_HPP_
