#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>

#include "mdrlab/bounds.hpp"
#include "mdrlab/error.hpp"
#include "parallel.hpp"
#include "table.hpp"

namespace mdrlab::cli {

namespace {

constexpr double kPi = std::numbers::pi;

// splitmix64 finalizer; decorrelates per-trial seeds derived from one run seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream * 1000003ULL + index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::string extension(Format f) { return f == Format::Csv ? ".csv" : ".json"; }

void emit(const RunConfig& config, const Table& table) { write_atomic(config.out, render(table, config.format)); }

std::vector<double> theta_grid(const RunConfig& config) {
  std::vector<double> thetas;
  const double step = (config.thetaStop - config.thetaStart) / static_cast<double>(config.thetaCount);
  for (std::size_t k = 0; k < config.thetaCount; ++k) thetas.push_back(config.thetaStart + step * static_cast<double>(k));
  // The maximum of the QM sum sits at pi/8; evaluate it exactly when it is in range.
  const double peak = kPi / 8.0;
  if (peak >= config.thetaStart && peak < config.thetaStop &&
      std::find(thetas.begin(), thetas.end(), peak) == thetas.end()) {
    thetas.insert(std::upper_bound(thetas.begin(), thetas.end(), peak), peak);
  }
  return thetas;
}

SearchBudget budget_for(const RunConfig& config) {
  SearchBudget b;
  b.grid = config.grid;
  b.seed = config.seed;
  return b;
}

// gamma_q of the reference source for each selected MDR, in selection order.
std::vector<GammaResult> reference_gammas(const RunConfig& config) {
  const auto source = reference_scenario(0.0).source;
  std::vector<GammaResult> out(config.mdrs.size());
  parallel_for(out.size(), [&](std::size_t i) { out[i] = gamma_q(config.mdrs[i], source, budget_for(config)); });
  return out;
}

std::string bound_column(MdrId mdr) { return "bound_" + std::string(to_string(mdr)); }

}  // namespace

int cmd_regions(const RunConfig& config) {
  const auto ctx = EnsembleContext::make(config.deltaA, config.deltaB, config.absC);
  if (!ctx.robertsonValid) throw ConfigError("ensemble values violate Delta A Delta B >= |<C>|");
  std::filesystem::path dir = config.out == "-" ? std::filesystem::path(".") : config.out;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());

  std::vector<Table> tables(config.mdrs.size());
  parallel_for(tables.size(), [&](std::size_t i) {
    tables[i].columns = {"eps", "eta"};
    for (const auto& p : region_boundary(config.mdrs[i], ctx, config.points)) tables[i].add_row({p.eps, p.eta});
  });
  for (std::size_t i = 0; i < tables.size(); ++i) {
    const auto path = dir / ("regions_" + std::string(to_string(config.mdrs[i])) + extension(config.format));
    write_atomic(path, render(tables[i], config.format));
  }
  return 0;
}

int cmd_fig3a(const RunConfig& config) {
  const auto gammas = reference_gammas(config);
  const auto thetas = theta_grid(config);
  std::vector<std::vector<Cell>> rows(thetas.size());
  parallel_for(thetas.size(), [&](std::size_t k) {
    const auto scenario = reference_scenario(thetas[k]);
    std::vector<Cell> row{thetas[k], qm_correlation_sum(thetas[k])};
    for (std::size_t i = 0; i < config.mdrs.size(); ++i) {
      row.emplace_back(theorem_bound(scenario, config.mdrs[i], gammas[i]).rhs);
    }
    rows[k] = std::move(row);
  });

  Table t;
  t.columns = {"theta3", "qm_sum"};
  for (auto mdr : config.mdrs) t.columns.push_back(bound_column(mdr));
  for (auto& row : rows) t.add_row(std::move(row));
  emit(config, t);
  return 0;
}

int cmd_fig3b(const RunConfig& config) {
  const auto gammas = reference_gammas(config);
  const auto thetas = theta_grid(config);
  std::vector<std::vector<Cell>> rows(thetas.size());
  parallel_for(thetas.size(), [&](std::size_t k) {
    std::vector<Cell> row{thetas[k], chsh_pair_sum(reference_scenario(thetas[k])).sum};
    for (const auto& g : gammas) row.emplace_back(chsh_bound(g.value));
    row.emplace_back(4.0);
    rows[k] = std::move(row);
  });

  Table t;
  t.columns = {"theta3", "chsh_sum"};
  for (auto mdr : config.mdrs) t.columns.push_back(bound_column(mdr));
  t.columns.push_back("qm_quadratic_max");
  for (auto& row : rows) t.add_row(std::move(row));
  emit(config, t);
  return 0;
}

int cmd_bounds_table(const RunConfig& config) {
  const auto gammas = reference_gammas(config);
  const auto scenario = reference_scenario(kPi / 8.0);
  Table t;
  t.columns = {"mdr", "gamma", "kappa", "kappa_approximate", "rhs", "chsh_bound", "gamma_upper_estimate",
               "grid_certified"};
  for (std::size_t i = 0; i < config.mdrs.size(); ++i) {
    const auto mdr = config.mdrs[i];
    t.add_row({std::string(to_string(mdr)), gammas[i].value, kappa(mdr), kappa_is_approximate(mdr),
               theorem_bound(scenario, mdr, gammas[i]).rhs, chsh_bound(gammas[i].value), gammas[i].upperEstimate,
               gammas[i].gridCertified});
  }
  emit(config, t);
  return 0;
}

namespace {

struct SuiteRow {
  std::string suite;
  std::string item;
  std::int64_t trials;
  double worst;      // largest residual, or most negative margin
  double threshold;
  bool passed;
};

std::vector<SuiteRow> suite_prop1(const RunConfig& config) {
  std::vector<SuiteRow> rows;
  const auto congruence = config.negativeControl ? Congruence::Adjoint : Congruence::Transpose;
  for (std::size_t n : config.dims) {
    std::vector<double> residuals(static_cast<std::size_t>(config.trials));
    parallel_for(residuals.size(), [&](std::size_t k) {
      const auto s0 = derive_seed(config.seed, 1, 1000 * n + k);
      const auto pair = ObservablePair::make(random_hermitian(n, s0), random_hermitian(n, s0 + 1));
      const auto state = build_nonfactorable(pair, random_unitary(n, s0 + 2), congruence);
      const auto r = verify_transfer(state);
      residuals[k] = std::max({r.a, r.b, dual_basis_form(state)});
    });
    const double worst = *std::max_element(residuals.begin(), residuals.end());
    rows.push_back({"prop1", "N=" + std::to_string(n), config.trials, worst, 1e-9, worst < 1e-9});
  }
  return rows;
}

std::vector<SuiteRow> suite_two_route(const RunConfig& config) {
  std::vector<SuiteRow> rows;
  for (std::size_t n : {2u, 3u}) {
    std::vector<double> gaps(static_cast<std::size_t>(config.trials));
    parallel_for(gaps.size(), [&](std::size_t k) {
      const auto s0 = derive_seed(config.seed, 2, 1000 * n + k);
      const auto pair = ObservablePair::make(random_hermitian(n, s0), random_hermitian(n, s0 + 1));
      const auto scenario = make_scenario(build_nonfactorable(pair, random_unitary(n, s0 + 2)),
                                          random_state({n}, s0 + 3), random_unitary(n * n, s0 + 4));
      const auto basis = ProjectionBasis::from_unitary(random_unitary(n, s0 + 5));
      const auto a = branch_error_sums(scenario, basis);
      const auto b = direct_error_sums(scenario);
      gaps[k] = std::max(std::abs(a.precision - b.precision), std::abs(a.disturbance - b.disturbance));
    });
    const double worst = *std::max_element(gaps.begin(), gaps.end());
    rows.push_back({"two-route", "N=" + std::to_string(n), config.trials, worst, 1e-9, worst < 1e-9});
  }
  return rows;
}

std::vector<SuiteRow> suite_gamma(const RunConfig& config) {
  const auto source = reference_scenario(0.0).source;
  std::vector<SuiteRow> rows(kAllMdrs.size());
  parallel_for(rows.size(), [&](std::size_t i) {
    const auto mdr = kAllMdrs[i];
    const double deviation = std::abs(gamma_q(mdr, source, budget_for(config)).value - kappa(mdr));
    const double tolerance = kappa_is_approximate(mdr) ? 5e-3 : 1e-6;
    rows[i] = {"gamma", std::string(to_string(mdr)), 1, deviation, tolerance, deviation < tolerance};
  });
  return rows;
}

std::vector<SuiteRow> suite_lambda(const RunConfig& config) {
  const std::array<MdrId, 5> surviving{MdrId::Oz, MdrId::Ha, MdrId::We, MdrId::B1, MdrId::B2};
  SearchBudget budget = budget_for(config);
  budget.grid = std::min<std::size_t>(budget.grid, 24);
  budget.refineStarts = 2;
  const auto source = reference_scenario(0.0).source;
  std::vector<GammaResult> gammas(surviving.size());
  parallel_for(gammas.size(), [&](std::size_t i) { gammas[i] = gamma_q(surviving[i], source, budget); });

  std::vector<std::array<double, 5>> margins(static_cast<std::size_t>(config.trials));
  parallel_for(margins.size(), [&](std::size_t k) {
    const auto s0 = derive_seed(config.seed, 4, k);
    const double theta = 2.0 * kPi * static_cast<double>(s0 % 100000) / 100000.0;
    const auto scenario = reference_scenario(theta);
    Matrix lambda;
    // Redraw until the filter is comfortably invertible.
    for (std::uint64_t attempt = 0;; ++attempt) {
      Matrix g = random_unitary(2, s0 + 10 * attempt) * random_hermitian(2, s0 + 10 * attempt + 1);
      Eigen::JacobiSVD<Matrix> svd(g);
      const auto sv = svd.singularValues();
      if (sv(1) > 0.0 && sv(0) / sv(1) < 1e3) {
        lambda = g;
        break;
      }
    }
    for (std::size_t i = 0; i < surviving.size(); ++i) {
      margins[k][i] = lambda_generalized_check(scenario, lambda, surviving[i], gammas[i], budget).bound.margin;
    }
  });

  std::vector<SuiteRow> rows;
  for (std::size_t i = 0; i < surviving.size(); ++i) {
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& m : margins) worst = std::min(worst, m[i]);
    rows.push_back({"lambda", std::string(to_string(surviving[i])), config.trials, worst, -1e-8, worst >= -1e-8});
  }
  return rows;
}

std::vector<SuiteRow> suite_max_corr(const RunConfig& config) {
  const auto r = max_corr_search(config.restarts, config.seed);
  const bool ok = r.value >= std::numbers::sqrt2 - 1e-3 && r.value <= std::numbers::sqrt2 + 1e-6;
  return {{"max-corr", "restarts=" + std::to_string(config.restarts), config.restarts,
           std::abs(r.value - std::numbers::sqrt2), 1e-3, ok}};
}

bool selected(const RunConfig& config, const std::string& suite) {
  return config.suites.empty() || std::find(config.suites.begin(), config.suites.end(), suite) != config.suites.end();
}

}  // namespace

int cmd_verify(const RunConfig& config) {
  std::vector<SuiteRow> rows;
  auto run = [&](const std::string& name, auto suite) {
    if (!selected(config, name)) return;
    for (auto& row : suite(config)) rows.push_back(std::move(row));
  };
  run("prop1", suite_prop1);
  run("two-route", suite_two_route);
  run("gamma", suite_gamma);
  run("lambda", suite_lambda);
  run("max-corr", suite_max_corr);

  Table t;
  t.columns = {"suite", "item", "trials", "worst", "threshold", "passed"};
  bool all = true;
  for (const auto& r : rows) {
    t.add_row({r.suite, r.item, r.trials, r.worst, r.threshold, r.passed});
    all = all && r.passed;
    std::cerr << (r.passed ? "PASS " : "FAIL ") << r.suite << ' ' << r.item << " worst=" << r.worst << '\n';
  }
  emit(config, t);
  return all ? 0 : 1;
}

int cmd_max_search(const RunConfig& config) {
  const auto r = max_corr_search(config.restarts, config.seed);
  Table t;
  t.columns = {"value", "theta", "phi", "reduced_form", "restarts", "seed"};
  for (int k = 0; k < 8; ++k) {
    t.columns.push_back("re" + std::to_string(k));
    t.columns.push_back("im" + std::to_string(k));
  }
  std::vector<Cell> row{r.value,
                        r.reduced.theta,
                        r.reduced.phi,
                        reduced_correlation_form(r.reduced.theta, r.reduced.phi),
                        static_cast<std::int64_t>(r.restarts),
                        std::to_string(config.seed)};
  for (std::size_t k = 0; k < 8; ++k) {
    row.emplace_back(r.argmax[k].real());
    row.emplace_back(r.argmax[k].imag());
  }
  t.add_row(std::move(row));
  emit(config, t);
  return 0;
}

}  // namespace mdrlab::cli
