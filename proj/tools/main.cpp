#include <functional>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "commands.hpp"
#include "mdrlab/error.hpp"

using namespace mdrlab::cli;

namespace {

// Flag values plus the option handles needed to tell "given" from "default".
struct FlagBindings {
  std::uint64_t seed = 0;
  std::string out, format, mdr, suite, dims, config;
  double thetaStart = 0.0, thetaStop = 0.0, deltaA = 0.0, deltaB = 0.0, absC = 0.0;
  long long thetaCount = 0, restarts = 0, points = 0, grid = 0, trials = 0;
  bool negativeControl = false;
  std::map<std::string, CLI::Option*> options;

  template <typename T>
  void add(CLI::App* app, const std::string& name, T& target, const std::string& help) {
    options[name] = app->add_option(name, target, help);
  }

  template <typename T>
  std::optional<T> given(const std::string& name, const T& value) const {
    auto it = options.find(name);
    if (it == options.end() || it->second->count() == 0) return std::nullopt;
    return value;
  }

  RawSettings raw() const {
    RawSettings s;
    s.seed = given("--seed", seed);
    s.out = given("--out", out);
    s.format = given("--format", format);
    s.mdr = given("--mdr", mdr);
    s.thetaStart = given("--theta-start", thetaStart);
    s.thetaStop = given("--theta-stop", thetaStop);
    s.thetaCount = given("--theta-count", thetaCount);
    s.restarts = given("--restarts", restarts);
    s.deltaA = given("--delta-a", deltaA);
    s.deltaB = given("--delta-b", deltaB);
    s.absC = given("--abs-c", absC);
    s.points = given("--points", points);
    s.grid = given("--grid", grid);
    s.suite = given("--suite", suite);
    s.dims = given("--dims", dims);
    s.trials = given("--trials", trials);
    if (auto it = options.find("--negative-control"); it != options.end() && it->second->count() > 0) {
      s.negativeControl = true;
    }
    return s;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Measurement-disturbance relations and tripartite correlation bounds"};
  app.require_subcommand(1);

  struct Entry {
    const char* name;
    const char* help;
    std::function<int(const RunConfig&)> run;
  };
  const std::vector<Entry> entries{
      {"regions", "boundary trace of each allowed region (one file per MDR; --out is a directory)", cmd_regions},
      {"fig3a", "QM correlation sum and per-MDR bounds over a theta3 sweep", cmd_fig3a},
      {"fig3b", "sum of two CHSH operators and per-MDR bounds over a theta3 sweep", cmd_fig3b},
      {"bounds-table", "gamma_q, kappa and correlation bounds for each MDR", cmd_bounds_table},
      {"verify", "property suites; exit 1 if any fails", cmd_verify},
      {"max-search", "random-restart maximum of E(Z2,Z3) + E(X1,X2)", cmd_max_search},
  };

  std::vector<FlagBindings> bindings(entries.size());
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    CLI::App* sub = app.add_subcommand(entries[i].name, entries[i].help);
    FlagBindings& b = bindings[i];
    b.add(sub, "--seed", b.seed, "run seed (default 1)");
    b.add(sub, "--out", b.out, "output path, '-' for stdout (default '-')");
    b.add(sub, "--format", b.format, "csv or json (default csv)");
    b.add(sub, "--mdr", b.mdr, "comma list of He,Oz,Ha,We,B1,B2 or 'all'");
    b.add(sub, "--theta-count", b.thetaCount, "theta3 grid points on [start, stop) (default 721)");
    b.add(sub, "--theta-start", b.thetaStart, "theta3 grid start (default 0)");
    b.add(sub, "--theta-stop", b.thetaStop, "theta3 grid stop, exclusive (default 2 pi)");
    b.add(sub, "--restarts", b.restarts, "random restarts for max-search (default 50)");
    b.add(sub, "--delta-a", b.deltaA, "Delta A for regions (default 1)");
    b.add(sub, "--delta-b", b.deltaB, "Delta B for regions (default 1)");
    b.add(sub, "--abs-c", b.absC, "|<C>| for regions (default 1)");
    b.add(sub, "--points", b.points, "boundary points per MDR (default 400)");
    b.add(sub, "--grid", b.grid, "gamma_q grid per Bloch angle (default 64)");
    b.add(sub, "--suite", b.suite, "verify suites: prop1,two-route,gamma,lambda,max-corr or all");
    b.add(sub, "--dims", b.dims, "particle dimensions for prop1 (default 2,3,4,5)");
    b.add(sub, "--trials", b.trials, "random draws per suite item (default 200)");
    b.options["--negative-control"] =
        sub->add_flag("--negative-control", b.negativeControl, "use U = W V W^dagger in prop1 (must fail)");
    b.add(sub, "--config", b.config, "flat JSON config; flags take precedence");
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (!subs[i]->parsed()) continue;
    const FlagBindings& b = bindings[i];
    try {
      RawSettings file;
      if (b.options.at("--config")->count() > 0) file = load_config_file(b.config);
      const RunConfig config = resolve(entries[i].name, file, b.raw());
      return entries[i].run(config);
    } catch (const ConfigError& e) {
      std::cerr << "config error: " << e.what() << '\n';
      return 2;
    } catch (const IoError& e) {
      std::cerr << "i/o error: " << e.what() << '\n';
      return 3;
    } catch (const mdrlab::Error& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 1;
    }
  }
  return 2;
}
