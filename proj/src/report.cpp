#include "zetalab/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <vector>
#include <unistd.h>

namespace zetalab {

namespace {

void emit(const nlohmann::json& j, std::string& out, int indent, int depth) {
  std::string pad(static_cast<std::size_t>(indent * depth), ' ');
  std::string pad_in(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  switch (j.type()) {
    case nlohmann::json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in;
        out += nlohmann::json(it.key()).dump();
        out += ": ";
        emit(it.value(), out, indent, depth + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case nlohmann::json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (auto& el : j) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in;
        emit(el, out, indent, depth + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    case nlohmann::json::value_t::number_float: {
      double d = j.get<double>();
      if (!std::isfinite(d)) {
        out += "null";
        return;
      }
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", d);
      out += buf;
      return;
    }
    default:
      out += j.dump();
      return;
  }
}

}  // namespace

std::string canonical_json(const nlohmann::json& j, int indent) {
  std::string out;
  emit(j, out, indent, 0);
  out += "\n";
  return out;
}

std::string csv_escape(const std::string& field) {
  bool needs = field.find_first_of(",\"\r\n") != std::string::npos;
  if (!needs) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

namespace {

std::string scalar_to_csv(const nlohmann::json& v) {
  if (v.is_number_float()) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
    return buf;
  }
  if (v.is_string()) return csv_escape(v.get<std::string>());
  return v.dump();
}

void flatten(const nlohmann::json& j, const std::string& prefix, std::string& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    return;
  }
  if (j.is_array()) {
    // a uniform array of flat objects renders as a table
    bool tabular = !j.empty() && j[0].is_object();
    for (auto& el : j)
      if (!el.is_object()) tabular = false;
    if (tabular) {
      std::vector<std::string> cols;
      for (auto it = j[0].begin(); it != j[0].end(); ++it) cols.push_back(it.key());
      out += csv_escape(prefix) + "\n";
      for (std::size_t c = 0; c < cols.size(); ++c)
        out += (c ? "," : "") + csv_escape(cols[c]);
      out += "\n";
      for (auto& el : j) {
        for (std::size_t c = 0; c < cols.size(); ++c) {
          out += c ? "," : "";
          out += el.contains(cols[c]) ? scalar_to_csv(el[cols[c]]) : "";
        }
        out += "\n";
      }
      return;
    }
    for (std::size_t i = 0; i < j.size(); ++i)
      flatten(j[i], prefix + "[" + std::to_string(i) + "]", out);
    return;
  }
  out += csv_escape(prefix) + "," + scalar_to_csv(j) + "\n";
}

}  // namespace

std::string report_to_csv(const nlohmann::json& j) {
  std::string out = "key,value\n";
  flatten(j, "", out);
  return out;
}

void atomic_write(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp." + std::to_string(::getpid());
  std::FILE* f = std::fopen(tmp.c_str(), "wb");
  if (!f) throw std::runtime_error("cannot open for writing: " + tmp);
  if (std::fwrite(content.data(), 1, content.size(), f) != content.size()) {
    std::fclose(f);
    std::remove(tmp.c_str());
    throw std::runtime_error("short write: " + tmp);
  }
  if (std::fclose(f) != 0) {
    std::remove(tmp.c_str());
    throw std::runtime_error("close failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw std::runtime_error("rename failed: " + path);
  }
}

}  // namespace zetalab
