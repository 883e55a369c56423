#include "params.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "fricmatch/error.hpp"

namespace fricmatch::cli {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    double v = std::stod(text, &used);
    if (used != text.size()) throw InvalidInput("");
    return v;
  } catch (const std::exception&) {
    throw InvalidInput("parameter '" + what + "': '" + text + "' is not a number");
  }
}

}  // namespace

Params::Params(std::vector<ParamDef> defs) : defs_(std::move(defs)) {
  for (const auto& d : defs_) {
    values_[d.key] = d.default_value;
    sources_[d.key] = "default";
  }
}

bool Params::known(const std::string& key) const { return values_.count(key) > 0; }

void Params::set(const std::string& key, const std::string& value, const std::string& source) {
  if (!known(key)) throw InvalidInput("unknown parameter '" + key + "' (from " + source + ")");
  values_[key] = trim(value);
  sources_[key] = source;
}

void Params::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config file '" + path + "'");
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InvalidInput(path + ":" + std::to_string(line_no) + ": expected key = value");
    }
    std::string key = trim(line.substr(0, eq));
    if (!known(key)) {
      throw InvalidInput(path + ":" + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    set(key, line.substr(eq + 1), path);
  }
}

const std::string& Params::str(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw InvalidInput("parameter '" + key + "' is not defined");
  return it->second;
}

double Params::num(const std::string& key) const { return to_double(str(key), key); }

long Params::integer(const std::string& key) const {
  double v = num(key);
  if (v != std::floor(v)) throw InvalidInput("parameter '" + key + "' must be an integer");
  return static_cast<long>(v);
}

std::uint64_t Params::u64(const std::string& key) const {
  const std::string& s = str(key);
  try {
    std::size_t used = 0;
    if (!s.empty() && s[0] == '-') throw InvalidInput("");
    auto v = std::stoull(s, &used);
    if (used != s.size()) throw InvalidInput("");
    return v;
  } catch (const std::exception&) {
    throw InvalidInput("parameter '" + key + "' must be an unsigned integer");
  }
}

bool Params::flag(const std::string& key) const {
  const std::string& s = str(key);
  if (s == "1" || s == "true" || s == "yes" || s == "on") return true;
  if (s == "0" || s == "false" || s == "no" || s == "off" || s.empty()) return false;
  throw InvalidInput("parameter '" + key + "' must be a boolean");
}

std::vector<double> parse_number_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string p;
    while (std::getline(ss, p, ':')) parts.push_back(trim(p));
    if (parts.size() != 3) throw InvalidInput("parameter '" + what + "': range is lo:hi:count");
    double lo = to_double(parts[0], what);
    double hi = to_double(parts[1], what);
    double cnt = to_double(parts[2], what);
    if (cnt < 1 || cnt != std::floor(cnt)) {
      throw InvalidInput("parameter '" + what + "': range count must be a positive integer");
    }
    auto n = static_cast<std::size_t>(cnt);
    for (std::size_t i = 0; i < n; ++i) {
      out.push_back(n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
    }
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(to_double(item, what));
  }
  if (out.empty()) throw InvalidInput("parameter '" + what + "' is an empty list");
  return out;
}

std::vector<double> Params::list(const std::string& key) const {
  return parse_number_list(str(key), key);
}

std::vector<std::string> Params::items(const std::string& key) const {
  std::vector<std::string> out;
  std::stringstream ss(str(key));
  std::string item;
  while (std::getline(ss, item, ';')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace fricmatch::cli
