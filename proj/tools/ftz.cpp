#include <iostream>

#include <CLI11.hpp>

#include "ftz/config.hpp"
#include "ftz/io.hpp"
#include "ftz/runner.hpp"

namespace {

enum Exit { kOk = 0, kAssertion = 1, kConfig = 2, kIo = 3 };

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Truncated Fock-space Toeplitz experiments"};
  std::string command, config_path, out_dir;
  app.add_option("command", command, "transform | toeplitz | decompose | bounds | schatten | carleson | selftest")
      ->required();
  app.add_option("--config", config_path, "JSON experiment config");
  app.add_option("--out", out_dir, "output directory (overrides output.dir)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    const ftz::Command cmd = ftz::parse_command(command);
    ftz::ExperimentConfig cfg;
    if (!config_path.empty())
      cfg = ftz::load_config(config_path);
    else if (cmd != ftz::Command::selftest)
      throw ftz::ConfigError("--config is required for " + command);
    if (!out_dir.empty()) cfg.output_dir = out_dir;

    const ftz::RunOutcome r = ftz::run(cmd, cfg, cfg.output_dir);
    for (const auto& a : r.report["assertions"])
      if (!a["passed"].get<bool>()) std::cerr << "FAIL " << a["name"].get<std::string>() << " [" << a["anchor"].get<std::string>() << "]\n";
    std::cout << command << ": " << (r.exit_code == 0 ? "all assertions passed" : "assertion failures")
              << " (report in " << cfg.output_dir << ")\n";
    return r.exit_code == 0 ? kOk : kAssertion;
  } catch (const ftz::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const ftz::IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kAssertion;
  }
}
