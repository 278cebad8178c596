#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace qimg {

// Streaming JSON writer with caller-controlled key order and fixed float
// formatting (17 significant digits), so identical inputs serialize to
// identical bytes. Reports need that stronger guarantee than a generic
// JSON library gives.
class JsonWriter {
 public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();

  JsonWriter& key(std::string_view k);

  JsonWriter& value(double v);
  JsonWriter& value(std::int64_t v);
  JsonWriter& value(std::uint64_t v);
  JsonWriter& value(int v) { return value(static_cast<std::int64_t>(v)); }
  JsonWriter& value(std::string_view v);
  JsonWriter& value(const char* v) { return value(std::string_view(v)); }
  JsonWriter& value(bool v);
  JsonWriter& null();

  const std::string& str() const { return out_; }

 private:
  void separator();
  void value_raw_string(std::string_view v);

  std::string out_;
  std::vector<bool> has_entry_;
  bool pending_key_ = false;
};

std::string format_double(double v);

// Writes via a temp file in the same directory plus rename, so a report or
// image path is never observed half-written. Throws IoError.
void write_file_atomic(const std::string& path, std::string_view bytes);

}  // namespace qimg
