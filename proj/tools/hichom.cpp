#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <nlohmann/json.hpp>
#include <string>

#include "hichom/errors.hpp"
#include "hichom/io.hpp"
#include "hichom/run.hpp"

namespace {

int env_threads() {
  const char* env = std::getenv("HICHOM_THREADS");
  if (env == nullptr) return 1;
  const int k = std::atoi(env);
  return k > 0 ? k : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hichom: periodic homogenization of high-contrast dielectric elastomer composites"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  int threads = env_threads();

  const auto add_command = [&](const std::string& name, const std::string& desc, bool config_required) {
    CLI::App* sub = app.add_subcommand(name, desc);
    auto* opt = sub->add_option("--config", config_path, "path to the JSON run configuration");
    if (config_required) opt->required();
    sub->add_option("--out", out_dir, "output directory (overrides the configuration)");
    sub->add_option("--threads", threads, "worker threads for independent solves");
    return sub;
  };

  add_command("cell", "solve the unit-cell corrector problems", true);
  add_command("tensors", "assemble the effective tensors", true);
  add_command("macro", "solve the homogenized macro system", true);
  add_command("dns", "run fine-scale simulations for the configured epsilons", true);
  add_command("converge", "verify homogenization against the fine-scale ladder", true);
  add_command("selftest", "run the acceptance suite (defaults when no config is given)", false);

  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    hichom::RunConfig config;
    if (!config_path.empty()) {
      config = hichom::parse_config(config_path);
      if (hichom::command_to_string(config.command) != command)
        config.command = hichom::command_from_string(command);
    } else {
      config.command = hichom::command_from_string(command);
    }
    hichom::RunOptions options;
    options.out_override = out_dir;
    options.threads = threads;
    return hichom::run_command(config, options);
  } catch (const hichom::Error& err) {
    nlohmann::ordered_json j;
    j["error"] = {{"code", hichom::error_code_name(err.code())}, {"message", err.message()}};
    std::printf("%s\n", j.dump(2).c_str());
    return hichom::error_exit_code(err.code());
  } catch (const std::exception& err) {
    nlohmann::ordered_json j;
    j["error"] = {{"code", "Internal"}, {"message", err.what()}};
    std::printf("%s\n", j.dump(2).c_str());
    return 2;
  }
}
