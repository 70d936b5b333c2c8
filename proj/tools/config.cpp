#include "config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "griffith/error.hpp"

using griffith::Error;
using griffith::ErrorKind;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_plain(const std::string& text, const std::string& key) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (!text.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    throw Error(ErrorKind::InvalidArgument, "config key '" + key + "': not a number: " + text);
  return v;
}

}  // namespace

double parse_number(const std::string& raw, const std::string& key) {
  const std::string text = trim(raw);
  const auto slash = text.find('/');
  if (slash == std::string::npos) return parse_plain(text, key);
  const double den = parse_plain(trim(text.substr(slash + 1)), key);
  if (den == 0.0) throw Error(ErrorKind::InvalidArgument, "config key '" + key + "': zero divisor");
  return parse_plain(trim(text.substr(0, slash)), key) / den;
}

void Config::load_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorKind::Io, "cannot read config file " + file.string());
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorKind::Io, file.string() + ":" + std::to_string(lineno) + ": expected key=value");
    values_[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
}

void Config::set(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos)
    throw Error(ErrorKind::InvalidArgument, "override '" + assignment + "' is not key=value");
  values_[trim(assignment.substr(0, eq))] = trim(assignment.substr(eq + 1));
}

std::string Config::str(const std::string& key, const std::string& fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double Config::num(const std::string& key, double fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : parse_number(it->second, key);
}

long Config::integer(const std::string& key, long fallback) const {
  const double v = num(key, static_cast<double>(fallback));
  if (v != static_cast<double>(static_cast<long>(v)))
    throw Error(ErrorKind::InvalidArgument, "config key '" + key + "' must be an integer");
  return static_cast<long>(v);
}

bool Config::flag(const std::string& key, bool fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const std::string& v = it->second;
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw Error(ErrorKind::InvalidArgument, "config key '" + key + "' must be a boolean");
}

std::vector<double> Config::list(const std::string& key,
                                 const std::vector<double>& fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::vector<double> out;
  std::stringstream ss(it->second);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!trim(item).empty()) out.push_back(parse_number(item, key));
  return out;
}
