#include "hpin/records.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace hpin {

namespace {

std::string render_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string render_csv(const ResultRecord::Value& v) {
  struct Visitor {
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(std::int64_t i) const { return std::to_string(i); }
    std::string operator()(std::uint64_t u) const { return std::to_string(u); }
    std::string operator()(double d) const { return render_double(d); }
    std::string operator()(const std::string& s) const { return s; }
  };
  return std::visit(Visitor{}, v);
}

void check_schema(std::span<const ResultRecord> records) {
  if (records.empty()) return;
  const auto& head = records.front().fields();
  for (const auto& rec : records) {
    if (rec.fields().size() != head.size())
      throw std::runtime_error("records: inconsistent field count");
    for (std::size_t i = 0; i < head.size(); ++i)
      if (rec.fields()[i].first != head[i].first)
        throw std::runtime_error("records: inconsistent field order");
  }
}

}  // namespace

std::string to_csv(std::span<const ResultRecord> records,
                   std::span<const std::string> empty_header) {
  check_schema(records);
  std::string out;
  if (records.empty()) {
    for (std::size_t i = 0; i < empty_header.size(); ++i) {
      if (i) out += ',';
      out += empty_header[i];
    }
    if (!empty_header.empty()) out += '\n';
    return out;
  }
  const auto& head = records.front().fields();
  for (std::size_t i = 0; i < head.size(); ++i) {
    if (i) out += ',';
    out += head[i].first;
  }
  out += '\n';
  for (const auto& rec : records) {
    const auto& fields = rec.fields();
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out += ',';
      out += render_csv(fields[i].second);
    }
    out += '\n';
  }
  return out;
}

std::string to_json(std::span<const ResultRecord> records) {
  check_schema(records);
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& rec : records) {
    nlohmann::ordered_json obj;
    for (const auto& [key, value] : rec.fields())
      std::visit([&](const auto& v) { obj[key] = v; }, value);
    arr.push_back(std::move(obj));
  }
  return arr.dump(2) + "\n";
}

namespace {

void write_file(const std::string& body, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << body;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace

void export_csv(std::span<const ResultRecord> records, const std::string& path,
                std::span<const std::string> empty_header) {
  write_file(to_csv(records, empty_header), path);
}

void export_json(std::span<const ResultRecord> records, const std::string& path) {
  write_file(to_json(records), path);
}

}  // namespace hpin
