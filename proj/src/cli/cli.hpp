#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "params.hpp"

namespace fricmatch::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitNonConvergence = 3;

/// Output directory plus the bookkeeping that ends up in the manifest.
class RunContext {
public:
  explicit RunContext(std::string out_dir);

  const std::string& out_dir() const noexcept { return out_dir_; }
  std::string path(const std::string& name) const;
  void write(const std::string& name, const std::string& content);
  /// Registers a file the command wrote itself.
  void record(const std::string& name) { outputs_.push_back(name); }
  void note(std::string text) { notes_.push_back(std::move(text)); }
  /// Marks the run as incomplete (some solves did not converge).
  void flag_partial(std::string what);

  bool partial() const noexcept { return !partial_.empty(); }
  const std::vector<std::string>& outputs() const noexcept { return outputs_; }
  const std::vector<std::string>& notes() const noexcept { return notes_; }
  const std::vector<std::string>& partial_items() const noexcept { return partial_; }

private:
  std::string out_dir_;
  std::vector<std::string> outputs_;
  std::vector<std::string> notes_;
  std::vector<std::string> partial_;
};

struct Command {
  std::string name;
  std::string summary;
  std::vector<ParamDef> params;
  std::function<void(const Params&, RunContext&)> run;
};

const std::vector<Command>& commands();

struct Preset {
  std::string name;
  std::string command;
  std::string summary;
  std::vector<std::pair<std::string, std::string>> values;
};

const std::vector<Preset>& presets();
const Preset* find_preset(const std::string& name);

/// Parses arguments, runs the subcommand and writes the manifest. Returns
/// the process exit code.
int run(int argc, char** argv);

std::string version();

}  // namespace fricmatch::cli
