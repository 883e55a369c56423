#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace fricmatch::cli {

struct ParamDef {
  std::string key;
  std::string default_value;
  std::string help;
};

/// Resolved parameters of one subcommand. Later sources override earlier
/// ones: defaults, preset, config file, command-line flags. Keys outside the
/// subcommand's definition are rejected.
class Params {
public:
  explicit Params(std::vector<ParamDef> defs);

  const std::vector<ParamDef>& defs() const noexcept { return defs_; }
  bool known(const std::string& key) const;
  void set(const std::string& key, const std::string& value, const std::string& source);

  /// Flat `key = value` lines; `#` starts a comment.
  void load_file(const std::string& path);

  const std::string& str(const std::string& key) const;
  double num(const std::string& key) const;
  long integer(const std::string& key) const;
  std::uint64_t u64(const std::string& key) const;
  bool flag(const std::string& key) const;
  bool empty(const std::string& key) const { return str(key).empty(); }
  /// Comma list ("0.1,0.5") or inclusive range "lo:hi:count".
  std::vector<double> list(const std::string& key) const;
  /// Items separated by ';'.
  std::vector<std::string> items(const std::string& key) const;

  const std::map<std::string, std::string>& values() const noexcept { return values_; }
  const std::map<std::string, std::string>& sources() const noexcept { return sources_; }

private:
  std::vector<ParamDef> defs_;
  std::map<std::string, std::string> values_;
  std::map<std::string, std::string> sources_;
};

std::vector<double> parse_number_list(const std::string& text, const std::string& what);

}  // namespace fricmatch::cli
