#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "percept/errors.hpp"
#include "percept/grid.hpp"

namespace percept {

/// Name <-> id mapping for segmentation classes. Id 0 is reserved for background.
class ClassRegistry {
 public:
  struct Entry {
    std::string name;
    int id;

    friend bool operator==(const Entry&, const Entry&) = default;
  };

  ClassRegistry() = default;
  explicit ClassRegistry(std::vector<Entry> entries) {
    for (auto& e : entries) add(std::move(e.name), e.id);
  }

  static ClassRegistry defaults() {
    return ClassRegistry({{"background", 0},
                          {"road", 1},
                          {"sidewalk", 2},
                          {"car", 3},
                          {"bus", 4},
                          {"person", 5},
                          {"traffic_light", 6},
                          {"traffic_sign", 7}});
  }

  /// Parses `name=id` lines; blank lines and `#` comments are skipped.
  static ClassRegistry parse(std::string_view text, const std::string& source = "<registry>") {
    ClassRegistry reg;
    std::istringstream in{std::string(text)};
    std::string line;
    std::uint64_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
      auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
      };
      line = trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw FormatError(source, lineno, "expected name=id");
      const std::string name = trim(line.substr(0, eq));
      int id = -1;
      try {
        std::size_t used = 0;
        const std::string idtext = trim(line.substr(eq + 1));
        id = std::stoi(idtext, &used);
        if (used != idtext.size()) id = -1;
      } catch (const std::exception&) {
      }
      if (name.empty() || id < 0 || id > 255)
        throw FormatError(source, lineno, "class id must be an integer in [0,255]");
      try {
        reg.add(name, id);
      } catch (const InputError& e) {
        throw FormatError(source, lineno, e.what());
      }
    }
    if (!reg.find("background")) reg.add("background", 0);
    return reg;
  }

  std::string serialize() const {
    std::string out;
    for (const auto& e : entries_) out += e.name + "=" + std::to_string(e.id) + "\n";
    return out;
  }

  void add(std::string name, int id) {
    if (find(name) || has_id(id)) throw InputError("duplicate class registry entry: " + name);
    if (id == 0 && name != "background") throw InputError("class id 0 is reserved for background");
    entries_.push_back({std::move(name), id});
    std::sort(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) { return a.id < b.id; });
  }

  std::optional<int> find(std::string_view name) const {
    for (const auto& e : entries_)
      if (e.name == name) return e.id;
    return std::nullopt;
  }

  int id(std::string_view name) const {
    if (auto v = find(name)) return *v;
    throw InputError("class not registered: " + std::string(name));
  }

  bool has_id(int id) const {
    return std::any_of(entries_.begin(), entries_.end(), [&](const Entry& e) { return e.id == id; });
  }

  std::string name(int id) const {
    for (const auto& e : entries_)
      if (e.id == id) return e.name;
    throw InputError("class id not registered: " + std::to_string(id));
  }

  const std::vector<Entry>& entries() const noexcept { return entries_; }

  friend bool operator==(const ClassRegistry&, const ClassRegistry&) = default;

 private:
  std::vector<Entry> entries_;
};

/// Per-pixel class ids.
struct SegMap {
  Grid<std::uint8_t> ids;

  int width() const noexcept { return ids.width(); }
  int height() const noexcept { return ids.height(); }

  BinaryMask class_mask(int class_id) const {
    BinaryMask m(ids.width(), ids.height());
    auto src = ids.values();
    auto dst = m.values();
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] == class_id ? 1 : 0;
    return m;
  }

  /// First unregistered id in raster order, if any.
  std::optional<int> first_unknown_id(const ClassRegistry& reg) const {
    bool known[256] = {};
    for (const auto& e : reg.entries()) known[e.id] = true;
    for (auto v : ids.values())
      if (!known[v]) return static_cast<int>(v);
    return std::nullopt;
  }
};

}  // namespace percept
