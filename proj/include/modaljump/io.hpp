// Copyright 2026 The modaljump Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file io.hpp
 * @brief Number formatting and buffered CSV output.
 *
 * Numbers are written in the shortest decimal form that parses back to the
 * same double. Files are UTF-8 with LF line endings.
 */

#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>

namespace modaljump {

inline std::string format_number(double v) {
  if (v == 0.0) return "0";  // also folds -0
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Write `text` to `path` in binary mode; throws IoError on failure.
inline void write_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
  os.write(text.data(), static_cast<std::streamsize>(text.size()));
  os.close();
  if (!os) throw IoError("failed writing '" + path.string() + "'");
}

class CsvBuilder {
 public:
  explicit CsvBuilder(std::initializer_list<std::string_view> header) {
    for (auto h : header) field(h);
    end_row();
  }
  CsvBuilder() = default;

  CsvBuilder& field(std::string_view s) {
    if (!row_start_) text_.push_back(',');
    text_.append(s);
    row_start_ = false;
    return *this;
  }
  CsvBuilder& field(double v) { return field(std::string_view(format_number(v))); }
  CsvBuilder& integer(long long v) { return field(std::string_view(std::to_string(v))); }
  void end_row() {
    text_.push_back('\n');
    row_start_ = true;
  }

  const std::string& str() const noexcept { return text_; }
  void save(const std::filesystem::path& path) const { write_file(path, text_); }

 private:
  std::string text_;
  bool row_start_{true};
};

}  // namespace modaljump
