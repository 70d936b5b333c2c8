#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

// Flat key=value configuration. Later assignments override earlier ones.
class Config {
 public:
  // Throws griffith::Error(Io) when the file cannot be read or a line is
  // malformed.
  void load_file(const std::filesystem::path& file);
  // "key=value"; throws griffith::Error(InvalidArgument) when '=' is missing.
  void set(const std::string& assignment);
  void set(const std::string& key, const std::string& value) { values_[key] = value; }

  bool has(const std::string& key) const { return values_.count(key) > 0; }
  std::string str(const std::string& key, const std::string& fallback) const;
  double num(const std::string& key, double fallback) const;
  long integer(const std::string& key, long fallback) const;
  bool flag(const std::string& key, bool fallback) const;
  // Comma separated numbers; "1/32" style fractions are accepted.
  std::vector<double> list(const std::string& key, const std::vector<double>& fallback) const;

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

double parse_number(const std::string& text, const std::string& key);
