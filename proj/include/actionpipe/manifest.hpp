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

// Split manifests, label maps and person-grouped split protocols.

#ifndef ACTIONPIPE_MANIFEST_HPP_
#define ACTIONPIPE_MANIFEST_HPP_

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "actionpipe/error.hpp"
#include "actionpipe/rng.hpp"

namespace actionpipe {

enum class Split : uint8_t { Train = 0, Val = 1, Test = 2 };

inline const char* split_name(Split s) {
  switch (s) {
    case Split::Train: return "train";
    case Split::Val: return "val";
    case Split::Test: return "test";
  }
  return "?";
}

inline Split parse_split(std::string_view s) {
  if (s == "train") return Split::Train;
  if (s == "val") return Split::Val;
  if (s == "test") return Split::Test;
  throw FormatError("unknown split tag '" + std::string(s) + "'");
}

struct ManifestRecord {
  std::string video_id;
  std::string path;
  std::string label;
  Split split = Split::Train;
  std::string group_id;
  friend bool operator==(const ManifestRecord&, const ManifestRecord&) = default;
};

namespace manifest_detail {

inline std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    const size_t tab = line.find('\t', start);
    out.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return out;
}

inline bool skip_line(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line.empty() || line.front() == '#';
}

}  // namespace manifest_detail

// Groups whose records appear under more than one split tag.
inline std::vector<std::string> leaked_groups(const std::vector<ManifestRecord>& records) {
  std::map<std::string, std::set<Split>> seen;
  for (const ManifestRecord& r : records) seen[r.group_id].insert(r.split);
  std::vector<std::string> leaked;
  for (const auto& [group, splits] : seen)
    if (splits.size() > 1) leaked.push_back(group);
  return leaked;
}

struct SplitManifest {
  std::vector<ManifestRecord> records;
  std::filesystem::path base_dir;  // relative paths resolve against this

  std::filesystem::path resolve(const ManifestRecord& r) const {
    const std::filesystem::path p(r.path);
    return p.is_absolute() || base_dir.empty() ? p : base_dir / p;
  }

  std::vector<const ManifestRecord*> in_split(Split s) const {
    std::vector<const ManifestRecord*> out;
    for (const ManifestRecord& r : records)
      if (r.split == s) out.push_back(&r);
    return out;
  }

  // Throws on duplicate ids, labels without a training record, or (when
  // `grouped`) any group that spans two splits.
  void validate(bool grouped) const {
    std::set<std::string> ids;
    std::set<std::string> labels, trained;
    for (const ManifestRecord& r : records) {
      if (!ids.insert(r.video_id).second) throw InvalidArgument("duplicate video id '" + r.video_id + "' in manifest");
      labels.insert(r.label);
      if (r.split == Split::Train) trained.insert(r.label);
    }
    for (const std::string& l : labels)
      if (!trained.count(l)) throw InvalidArgument("label '" + l + "' has no training record");
    if (grouped) {
      const auto leaked = leaked_groups(records);
      if (!leaked.empty()) throw InvalidArgument("group '" + leaked.front() + "' appears in more than one split");
    }
  }

  static SplitManifest read(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open manifest: " + path.string());
    SplitManifest m;
    m.base_dir = path.parent_path();
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (manifest_detail::skip_line(line)) continue;
      const auto f = manifest_detail::split_tabs(line);
      if (f.size() != 5)
        throw FormatError(path.string() + ":" + std::to_string(line_no) + ": expected 5 tab-separated fields");
      m.records.push_back({f[0], f[1], f[2], parse_split(f[3]), f[4]});
    }
    return m;
  }

  void write(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write manifest: " + path.string());
    out << "# video_id\tpath\tlabel\tsplit\tgroup_id\n";
    for (const ManifestRecord& r : records)
      out << r.video_id << '\t' << r.path << '\t' << r.label << '\t' << split_name(r.split) << '\t' << r.group_id << '\n';
    if (!out) throw IoError("write failed: " + path.string());
  }
};

// Label name <-> dense class index.
struct LabelMap {
  std::vector<std::string> names;

  size_t size() const { return names.size(); }

  int index_of(const std::string& name) const {
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw InvalidArgument("unknown label '" + name + "'");
    return static_cast<int>(it - names.begin());
  }

  // Sorted unique labels of the manifest.
  static LabelMap from_manifest(const SplitManifest& m) {
    std::set<std::string> unique;
    for (const ManifestRecord& r : m.records) unique.insert(r.label);
    return {std::vector<std::string>(unique.begin(), unique.end())};
  }

  // One "name<TAB>index" pair per line; indices must be 0..n-1.
  static LabelMap read(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open label map: " + path.string());
    std::map<long, std::string> by_index;
    std::string line;
    while (std::getline(in, line)) {
      if (manifest_detail::skip_line(line)) continue;
      const auto f = manifest_detail::split_tabs(line);
      if (f.size() != 2) throw FormatError(path.string() + ": expected 'name<TAB>index'");
      long index = 0;
      try {
        index = std::stol(f[1]);
      } catch (const std::exception&) {
        throw FormatError(path.string() + ": bad index '" + f[1] + "'");
      }
      if (!by_index.emplace(index, f[0]).second) throw FormatError(path.string() + ": duplicate index");
    }
    LabelMap map;
    for (const auto& [index, name] : by_index) {
      if (index != static_cast<long>(map.names.size())) throw FormatError(path.string() + ": indices must be 0..n-1");
      map.names.push_back(name);
    }
    return map;
  }

  void write(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write label map: " + path.string());
    for (size_t i = 0; i < names.size(); ++i) out << names[i] << '\t' << i << '\n';
  }
};

struct PersonSplitCounts {
  size_t train = 8;
  size_t val = 8;
  size_t test = 9;
};

// Assigns whole groups to splits; records of unassigned groups are dropped.
inline SplitManifest apply_group_assignment(const SplitManifest& source, const std::map<std::string, Split>& assignment) {
  SplitManifest out;
  out.base_dir = source.base_dir;
  for (const ManifestRecord& r : source.records) {
    const auto it = assignment.find(r.group_id);
    if (it == assignment.end()) continue;
    ManifestRecord copy = r;
    copy.split = it->second;
    out.records.push_back(std::move(copy));
  }
  return out;
}

// Shuffles the sorted distinct group ids with `seed` and deals the first
// counts.train to train, the next counts.val to val, then counts.test to test.
inline SplitManifest person_split(const SplitManifest& source, PersonSplitCounts counts, uint64_t seed) {
  std::set<std::string> unique;
  for (const ManifestRecord& r : source.records) unique.insert(r.group_id);
  const size_t needed = counts.train + counts.val + counts.test;
  detail::require(unique.size() >= needed, "person split needs " + std::to_string(needed) + " groups, manifest has " +
                                               std::to_string(unique.size()));
  std::vector<std::string> groups(unique.begin(), unique.end());
  rng::SplitMix gen(seed);
  rng::shuffle(groups, gen);
  std::map<std::string, Split> assignment;
  for (size_t i = 0; i < needed; ++i)
    assignment[groups[i]] = i < counts.train ? Split::Train : i < counts.train + counts.val ? Split::Val : Split::Test;
  return apply_group_assignment(source, assignment);
}

}  // namespace actionpipe

#endif  // ACTIONPIPE_MANIFEST_HPP_
