#pragma once

// Flat result records and their CSV/JSON export.  A record carries every
// input (including the seed and toolkit version) next to the outputs, so a
// record plus the binary reproduces the run bit for bit.

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace hpin {

inline constexpr const char* kToolkitVersion = "0.1.0";

class ResultRecord {
 public:
  using Value = std::variant<bool, std::int64_t, std::uint64_t, double,
                             std::string>;

  ResultRecord& add(std::string key, Value value) {
    fields_.emplace_back(std::move(key), std::move(value));
    return *this;
  }

  const std::vector<std::pair<std::string, Value>>& fields() const {
    return fields_;
  }

 private:
  std::vector<std::pair<std::string, Value>> fields_;
};

// CSV: UTF-8, comma separated, header row from the (shared) field order,
// floats rendered %.17g (round-trip exact), LF line endings.  An empty record
// list yields a header-only file built from `empty_header`.
std::string to_csv(std::span<const ResultRecord> records,
                   std::span<const std::string> empty_header = {});

// JSON: array of flat objects, same field names as the CSV columns.
std::string to_json(std::span<const ResultRecord> records);

// Throw std::runtime_error on IO failure.
void export_csv(std::span<const ResultRecord> records, const std::string& path,
                std::span<const std::string> empty_header = {});
void export_json(std::span<const ResultRecord> records, const std::string& path);

}  // namespace hpin
