#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>

#include <CLI11.hpp>
#include <json.hpp>

#include "cli.hpp"
#include "fricmatch/error.hpp"
#include "fricmatch/kernels/kernels.hpp"

#ifndef FRICMATCH_VERSION
#define FRICMATCH_VERSION "0.0.0"
#endif

namespace fricmatch::cli {

namespace fs = std::filesystem;

std::string version() { return FRICMATCH_VERSION; }

RunContext::RunContext(std::string out_dir) : out_dir_(std::move(out_dir)) {}

std::string RunContext::path(const std::string& name) const {
  return (fs::path(out_dir_) / name).string();
}

void RunContext::write(const std::string& name, const std::string& content) {
  std::ofstream f(path(name), std::ios::binary);
  if (!f) throw InvalidInput("cannot write '" + path(name) + "'");
  f << content;
  if (!f) throw InvalidInput("write failed for '" + path(name) + "'");
  outputs_.push_back(name);
}

void RunContext::flag_partial(std::string what) { partial_.push_back(std::move(what)); }

namespace {

struct Invocation {
  const Command* command = nullptr;
  std::string config;
  std::string out = "out";
  std::string preset;
  std::optional<std::string> seed;
  std::map<std::string, std::string> flags;
};

void write_manifest(const RunContext& ctx, const Invocation& inv, const Params& params,
                    const std::string& status, int exit_code, const std::string& message) {
  nlohmann::json m;
  m["tool"] = "fricmatch";
  m["version"] = version();
  m["command"] = inv.command->name;
  m["preset"] = inv.preset.empty() ? nlohmann::json(nullptr) : nlohmann::json(inv.preset);
  m["config_file"] = inv.config.empty() ? nlohmann::json(nullptr) : nlohmann::json(inv.config);
  m["config"] = params.values();
  m["sources"] = params.sources();
  m["kernel_backend"] = kernels::backend_name(kernels::active_backend());
  m["status"] = status;
  m["exit_code"] = exit_code;
  if (!message.empty()) m["message"] = message;
  m["outputs"] = ctx.outputs();
  m["partial"] = ctx.partial_items();
  m["notes"] = ctx.notes();
  std::ofstream f(ctx.path("manifest.json"), std::ios::binary);
  f << m.dump(2) << '\n';
}

int execute(const Invocation& inv) {
  Params params(inv.command->params);
  try {
    if (!inv.preset.empty()) {
      const Preset* p = find_preset(inv.preset);
      if (!p) throw InvalidInput("unknown preset '" + inv.preset + "'");
      if (p->command != inv.command->name) {
        throw InvalidInput("preset '" + inv.preset + "' belongs to '" + p->command + "'");
      }
      for (const auto& [k, v] : p->values) params.set(k, v, "preset " + p->name);
    }
    if (!inv.config.empty()) params.load_file(inv.config);
    for (const auto& [k, v] : inv.flags) params.set(k, v, "flag");
    if (inv.seed) params.set("seed", *inv.seed, "flag");
    params.u64("seed");
  } catch (const InvalidInput& e) {
    std::cerr << "fricmatch " << inv.command->name << ": " << e.what() << '\n';
    return kExitInvalid;
  }

  std::error_code ec;
  fs::create_directories(inv.out, ec);
  if (ec) {
    std::cerr << "fricmatch: cannot create '" << inv.out << "': " << ec.message() << '\n';
    return kExitInvalid;
  }
  RunContext ctx(inv.out);
  int code = kExitOk;
  std::string status = "ok";
  std::string message;
  try {
    inv.command->run(params, ctx);
    if (ctx.partial()) {
      code = kExitNonConvergence;
      status = "partial";
      message = "some solves did not converge";
    }
  } catch (const InvalidInput& e) {
    code = kExitInvalid;
    status = "invalid_input";
    message = e.what();
  } catch (const Degenerate& e) {
    code = kExitInvalid;
    status = "degenerate";
    message = e.what();
  } catch (const NonConvergence& e) {
    code = kExitNonConvergence;
    status = "non_convergence";
    message = e.what();
  }
  write_manifest(ctx, inv, params, status, code, message);
  if (!message.empty()) std::cerr << "fricmatch " << inv.command->name << ": " << message << '\n';
  for (const auto& p : ctx.partial_items()) std::cerr << "  " << p << '\n';
  return code;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Frictional many-to-one matching markets: solvers, simulator, estimator"};
  app.require_subcommand(0, 1);
  bool show_version = false;
  bool list_presets = false;
  app.add_flag("--version", show_version, "print the version");
  app.add_flag("--list-presets", list_presets, "list built-in presets");

  std::vector<std::unique_ptr<Invocation>> invs;
  std::vector<std::pair<CLI::App*, Invocation*>> subs;
  for (std::size_t c = 0; c < commands().size(); ++c) {
    const auto& cmd = commands()[c];
    invs.push_back(std::make_unique<Invocation>());
    Invocation* inv = invs.back().get();
    inv->command = &cmd;
    auto* sub = app.add_subcommand(cmd.name, cmd.summary);
    sub->add_option("--config", inv->config, "flat key = value file");
    sub->add_option("--out", inv->out, "output directory")->capture_default_str();
    sub->add_option("--preset", inv->preset, "built-in preset");
    sub->add_option_function<std::string>(
        "--seed", [inv](const std::string& s) { inv->seed = s; }, "random seed (u64)");
    for (const auto& d : cmd.params) {
      if (d.key == "seed") continue;
      std::string help = d.help;
      if (!d.default_value.empty()) help += " [" + d.default_value + "]";
      std::string key = d.key;
      sub->add_option_function<std::string>(
          "--" + key, [inv, key](const std::string& v) { inv->flags[key] = v; }, help);
    }
    subs.emplace_back(sub, inv);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  if (show_version) {
    std::cout << "fricmatch " << version() << '\n';
    return kExitOk;
  }
  if (list_presets) {
    for (const auto& p : presets()) {
      std::cout << p.name << "  (" << p.command << ")  " << p.summary << '\n';
    }
    return kExitOk;
  }
  for (auto& [sub, inv] : subs) {
    if (sub->parsed()) return execute(*inv);
  }
  std::cerr << app.help();
  return kExitInvalid;
}

}  // namespace fricmatch::cli
