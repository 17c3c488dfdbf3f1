#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include "triphase/io.hpp"
#include "triphase/runner.hpp"

using namespace triphase;

int main(int argc, char** argv) {
  CLI::App app{"Finite-element solver for penalized multi-component phase separation"};
  app.require_subcommand(1);

  std::string configPath, benchmark, scheme, outDir, dtsArg;
  double refDt = 0.0;

  auto* runCmd = app.add_subcommand("run", "execute one benchmark run");
  runCmd->add_option("--config", configPath, "key/value config file")->required();
  runCmd->add_option("--benchmark", benchmark, "benchmark id (overrides config)");
  runCmd->add_option("--scheme", scheme, "TD1|NTD1|NTC2|NCOMP (overrides config)");
  runCmd->add_option("--out", outDir, "output directory (overrides config)");

  auto* eocCmd = app.add_subcommand("eoc", "experimental order of convergence harness");
  eocCmd->add_option("--config", configPath, "key/value config file")->required();
  eocCmd->add_option("--dts", dtsArg, "comma- or space-separated dt ladder, descending")
      ->required();
  eocCmd->add_option("--ref-dt", refDt, "reference dt (smaller than all ladder dts)")
      ->required();
  eocCmd->add_option("--benchmark", benchmark, "benchmark id (overrides config)");
  eocCmd->add_option("--scheme", scheme, "TD1|NTD1|NTC2|NCOMP (overrides config)");
  eocCmd->add_option("--out", outDir, "output directory (overrides config)");

  auto* listCmd = app.add_subcommand("list", "list the built-in benchmarks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (listCmd->parsed()) {
      std::cout << catalogListing();
      return 0;
    }

    std::optional<std::string> benchOv, schemeOv;
    if (!benchmark.empty()) benchOv = benchmark;
    if (!scheme.empty()) schemeOv = scheme;
    RunConfig config = parseConfig(configPath, benchOv, schemeOv);
    if (!outDir.empty()) config.outDir = outDir;
    if (const char* env = std::getenv("TRIPHASE_OUT"); env && *env) config.outDir = env;

    if (runCmd->parsed()) {
      const RunOutputs out = cmdRun(config);
      std::cout << "run complete: t = " << out.finalState.t << ", diagnostics at "
                << out.csvPath << "\n";
      return 0;
    }

    // eoc
    std::vector<double> dts;
    {
      std::string s = dtsArg;
      for (char& c : s)
        if (c == ',') c = ' ';
      std::istringstream in(s);
      double v;
      while (in >> v) dts.push_back(v);
    }
    const EocTable table = cmdEoc(config, dts, refDt);
    writeEocCsv(table, std::cout);
    std::filesystem::create_directories(config.outDir);
    std::ofstream file(config.outDir + "/eoc.csv");
    writeEocCsv(table, file);
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
