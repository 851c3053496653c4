// Command-line front end: analytic equilibria, deviation certification,
// welfare sweeps, and seeded market simulation with file outputs.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pandora/equilibrium.hpp"
#include "pandora/montecarlo.hpp"
#include "pandora/verify.hpp"

namespace {

using pandora::MarketParams;
using pandora::Regime;

// ---------------------------------------------------------------------------
// Output tables: CSV with a versioned schema comment, JSON mirroring the
// same columns. Numeric cells are printed with 12 significant digits; the
// JSON carries the identical rounded values.

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

using Cell = std::variant<double, std::int64_t, std::uint64_t, bool, std::string>;

struct Table {
  std::string command;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) {
      throw std::logic_error("row width does not match the column set");
    }
    rows.push_back(std::move(row));
  }

  std::string to_csv() const {
    std::ostringstream out;
    out << "# pandora-market-csv-v1 command=" << command << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i) {
      out << columns[i] << (i + 1 < columns.size() ? "," : "\n");
    }
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        std::visit(
            [&](const auto& v) {
              using T = std::decay_t<decltype(v)>;
              if constexpr (std::is_same_v<T, double>) {
                out << format_double(v);
              } else if constexpr (std::is_same_v<T, bool>) {
                out << (v ? 1 : 0);
              } else {
                out << v;
              }
            },
            row[i]);
        out << (i + 1 < row.size() ? "," : "\n");
      }
    }
    return out.str();
  }

  std::string to_json() const {
    nlohmann::ordered_json doc;
    doc["schema"] = "pandora-market-json-v1";
    doc["command"] = command;
    doc["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : rows) {
      nlohmann::ordered_json jrow;
      for (std::size_t i = 0; i < row.size(); ++i) {
        std::visit(
            [&](const auto& v) {
              using T = std::decay_t<decltype(v)>;
              if constexpr (std::is_same_v<T, double>) {
                // same 12-significant-digit value as the CSV cell
                jrow[columns[i]] = std::strtod(format_double(v).c_str(), nullptr);
              } else {
                jrow[columns[i]] = v;
              }
            },
            row[i]);
      }
      doc["rows"].push_back(std::move(jrow));
    }
    return doc.dump(2) + "\n";
  }

  void emit(const std::string& out_path, const std::string& format) const {
    const std::string text = format == "json" ? to_json() : to_csv();
    if (out_path.empty()) {
      std::cout << text;
      return;
    }
    std::ofstream file(out_path, std::ios::binary);
    if (!file) {
      throw std::runtime_error("cannot open output file: " + out_path);
    }
    file << text;
  }
};

// ---------------------------------------------------------------------------
// Configuration: defaults < config file < command-line flags. The config
// file is flat key=value with keys named exactly as the fields below.

struct RunConfig {
  int n = 2;
  double mu = 0.5;
  double c = 0.1;
  std::string regime = "posted";
  std::uint64_t seed = 0;
  std::uint64_t reps = 100000;
  int workers = 0;
  int price_grid = 200;
  int support_grid = 200;
  bool include_ternary = false;
  double tolerance = 1e-6;
  std::string out;
  std::string format = "csv";
  int n_min = 2;
  int n_max = 10;
  double corrupt_profit = 0.0;  // test hook: shifts the certified constant
};

std::uint64_t default_seed_from_env() {
  if (const char* env = std::getenv("PANDORA_MARKET_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return 0;
}

Regime parse_regime(const std::string& name) {
  if (name == "hidden") return Regime::Hidden;
  if (name == "posted") return Regime::Posted;
  pandora::throw_error(pandora::ErrorCode::OutOfRange,
                       "regime must be 'hidden' or 'posted'");
}

void apply_config_file(const std::string& path, CLI::App* cmd, RunConfig& cfg) {
  std::ifstream file(path);
  if (!file) {
    pandora::throw_error(pandora::ErrorCode::OutOfRange,
                         "cannot read config file: " + path);
  }
  const auto flag_given = [&](const std::string& flag) {
    const CLI::Option* opt = cmd->get_option_no_throw(flag);
    return opt != nullptr && opt->count() > 0;
  };
  std::string line;
  int line_no = 0;
  while (std::getline(file, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      pandora::throw_error(pandora::ErrorCode::OutOfRange,
                           "config line " + std::to_string(line_no) +
                               " is not key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto as_bool = [&]() {
      return value == "1" || value == "true" || value == "yes";
    };
    if (key == "n" && !flag_given("--n")) cfg.n = std::stoi(value);
    else if (key == "mu" && !flag_given("--mu")) cfg.mu = std::stod(value);
    else if (key == "c" && !flag_given("--c")) cfg.c = std::stod(value);
    else if (key == "regime" && !flag_given("--regime")) cfg.regime = value;
    else if (key == "seed" && !flag_given("--seed")) cfg.seed = std::stoull(value);
    else if (key == "reps" && !flag_given("--reps")) cfg.reps = std::stoull(value);
    else if (key == "workers" && !flag_given("--workers")) cfg.workers = std::stoi(value);
    else if (key == "price_grid" && !flag_given("--price-grid")) cfg.price_grid = std::stoi(value);
    else if (key == "support_grid" && !flag_given("--support-grid")) cfg.support_grid = std::stoi(value);
    else if (key == "include_ternary" && !flag_given("--include-ternary")) cfg.include_ternary = as_bool();
    else if (key == "tolerance" && !flag_given("--tolerance")) cfg.tolerance = std::stod(value);
    else if (key == "out" && !flag_given("--out")) cfg.out = value;
    else if (key == "format" && !flag_given("--format")) cfg.format = value;
    else if (key == "n_min" && !flag_given("--n-min")) cfg.n_min = std::stoi(value);
    else if (key == "n_max" && !flag_given("--n-max")) cfg.n_max = std::stoi(value);
    else if (key == "n" || key == "mu" || key == "c" || key == "regime" ||
             key == "seed" || key == "reps" || key == "workers" ||
             key == "price_grid" || key == "support_grid" ||
             key == "include_ternary" || key == "tolerance" || key == "out" ||
             key == "format" || key == "n_min" || key == "n_max") {
      // flag explicitly given; config value ignored by precedence
    } else {
      pandora::throw_error(pandora::ErrorCode::OutOfRange,
                           "unknown config key: " + key);
    }
  }
}

// ---------------------------------------------------------------------------
// Commands.

int cmd_equilibrium(const RunConfig& cfg) {
  const MarketParams params = pandora::validate(cfg.n, cfg.mu, cfg.c);
  const Regime regime = parse_regime(cfg.regime);
  Table table;
  table.command = "equilibrium";
  table.columns = {"regime",      "n",           "mu",
                   "c",           "u_low",       "u_high",
                   "support_low", "support_high", "firm_profit",
                   "consumer_welfare", "sample_u", "price", "phi"};
  if (regime == Regime::Hidden) {
    const auto eq = pandora::hidden_equilibrium(params);
    table.add_row({std::string("hidden"), std::int64_t{params.n}, params.mu,
                   params.c, params.u_low, params.u_high, 0.0, 0.0,
                   eq.firm_profit, eq.consumer_welfare, 1.0, 0.0, 1.0});
  } else {
    const auto eq = pandora::posted_equilibrium(params);
    const auto support = pandora::posted_price_support(params);
    for (int i = 0; i <= 10; ++i) {
      const double u = static_cast<double>(i) / 10.0;
      const double price = pandora::posted_price_quantile(params, u);
      const double phi = pandora::posted_price_cdf(params, price);
      table.add_row({std::string("posted"), std::int64_t{params.n}, params.mu,
                     params.c, params.u_low, params.u_high, support.low,
                     support.high, eq.firm_profit, eq.consumer_welfare, u,
                     price, phi});
    }
  }
  table.emit(cfg.out, cfg.format);
  return 0;
}

int cmd_verify(const RunConfig& cfg) {
  const MarketParams params = pandora::validate(cfg.n, cfg.mu, cfg.c);
  pandora::DeviationSearchOptions options;
  options.price_points = cfg.price_grid;
  options.support_points = cfg.support_grid;
  options.include_ternary = cfg.include_ternary;
  options.workers = cfg.workers;
  const auto report = pandora::certify_deviation_proofness(params, options);

  const double equilibrium_profit =
      report.equilibrium_profit - cfg.corrupt_profit;
  const double margin = report.best_profit - equilibrium_profit;

  // Majorization sweep across the dispersed-price support.
  const auto support = pandora::posted_price_support(params);
  double min_gap = 0.0;
  double worst_touch = 0.0;
  bool majorization_ok = true;
  for (int i = 0; i < 100; ++i) {
    const double p =
        i == 99 ? support.high
                : support.low + (support.high - support.low) * i / 99.0;
    const auto check = pandora::check_majorization(params, p, 10000);
    min_gap = std::min(min_gap, check.min_gap);
    worst_touch = std::max(worst_touch, check.max_abs_gap_at_touch);
    if (check.min_gap < -1e-12 || check.max_abs_gap_at_touch > 1e-10) {
      majorization_ok = false;
    }
  }

  const bool certified = margin <= cfg.tolerance && majorization_ok;

  Table table;
  table.command = "verify";
  table.columns = {"n", "mu", "c", "price_grid", "support_grid",
                   "include_ternary", "tolerance", "refine_levels",
                   "equilibrium_profit", "best_profit", "margin", "certified",
                   "best_kind", "best_price", "best_support_size",
                   "best_x0", "best_x1", "best_x2",
                   "best_w0", "best_w1", "best_w2",
                   "majorization_ok", "majorization_min_gap",
                   "majorization_touch_gap"};
  const auto& best = report.best;
  table.add_row({std::int64_t{params.n}, params.mu, params.c,
                 std::int64_t{cfg.price_grid}, std::int64_t{cfg.support_grid},
                 cfg.include_ternary, cfg.tolerance,
                 std::int64_t{report.refine_levels}, equilibrium_profit,
                 report.best_profit, margin, certified,
                 std::string(pandora::to_string(best.kind)), best.price,
                 std::int64_t{best.support_size}, best.posterior_support[0],
                 best.posterior_support[1], best.posterior_support[2],
                 best.weight[0], best.weight[1], best.weight[2],
                 majorization_ok, min_gap, worst_touch});
  table.emit(cfg.out, cfg.format);

  if (!certified) {
    std::cerr << "certification FAILED: margin " << format_double(margin)
              << " exceeds tolerance " << format_double(cfg.tolerance)
              << "; best deviation: kind=" << pandora::to_string(best.kind)
              << " price=" << format_double(best.price) << " support={";
    for (int i = 0; i < best.support_size; ++i) {
      std::cerr << (i ? "," : "") << format_double(best.posterior_support[i]);
    }
    std::cerr << "} weights={";
    for (int i = 0; i < best.support_size; ++i) {
      std::cerr << (i ? "," : "") << format_double(best.weight[i]);
    }
    std::cerr << "}" << (majorization_ok ? "" : " (majorization violated)")
              << "\n";
    return 1;
  }
  return 0;
}

int cmd_welfare(const RunConfig& cfg) {
  if (cfg.n_min < 2 || cfg.n_max < cfg.n_min) {
    pandora::throw_error(pandora::ErrorCode::OutOfRange,
                         "need 2 <= n_min <= n_max");
  }
  pandora::validate(cfg.n_min, cfg.mu, cfg.c);
  const int n_star = pandora::posting_threshold(cfg.mu);
  Table table;
  table.command = "welfare";
  table.columns = {"n",           "mu",          "c",
                   "hidden_welfare", "posted_welfare", "posted_profit",
                   "consumer_prefers_posted", "n_star"};
  for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
    const MarketParams params = pandora::validate(n, cfg.mu, cfg.c);
    const double hidden = pandora::consumer_welfare(params, Regime::Hidden);
    const double posted = pandora::consumer_welfare(params, Regime::Posted);
    table.add_row({std::int64_t{n}, params.mu, params.c, hidden, posted,
                   pandora::posted_equilibrium_profit(params), n >= n_star,
                   std::int64_t{n_star}});
  }
  table.emit(cfg.out, cfg.format);
  return 0;
}

int cmd_simulate(const RunConfig& cfg) {
  const MarketParams params = pandora::validate(cfg.n, cfg.mu, cfg.c);
  const Regime regime = parse_regime(cfg.regime);
  const auto stats = pandora::simulate_market(params, regime, cfg.reps,
                                              cfg.seed, cfg.workers);
  const double analytic_profit =
      regime == Regime::Posted ? pandora::posted_equilibrium_profit(params) : 0.0;
  const double analytic_surplus = pandora::consumer_welfare(params, regime);
  const double analytic_purchase =
      pandora::analytic_purchase_probability(params, regime);
  const auto z = [](const pandora::MetricStat& stat, double analytic) {
    if (stat.standard_error == 0.0) {
      return stat.mean == analytic ? 0.0 : std::numeric_limits<double>::max();
    }
    return (stat.mean - analytic) / stat.standard_error;
  };
  Table table;
  table.command = "simulate";
  table.columns = {"regime", "n", "mu", "c", "reps", "seed",
                   "surplus_mean", "surplus_se",
                   "profit_mean", "profit_se",
                   "purchase_mean", "purchase_se",
                   "visits_mean", "visits_se",
                   "price_mean", "price_se", "purchases",
                   "analytic_surplus", "analytic_profit", "analytic_purchase",
                   "z_surplus", "z_profit", "z_purchase"};
  table.add_row({std::string(pandora::to_string(regime)), std::int64_t{params.n},
                 params.mu, params.c, std::uint64_t{cfg.reps},
                 std::uint64_t{cfg.seed},
                 stats.consumer_surplus.mean, stats.consumer_surplus.standard_error,
                 stats.firm_profit.mean, stats.firm_profit.standard_error,
                 stats.purchase_probability.mean,
                 stats.purchase_probability.standard_error,
                 stats.visits.mean, stats.visits.standard_error,
                 stats.transaction_price.mean,
                 stats.transaction_price.standard_error,
                 std::uint64_t{stats.transaction_price.count},
                 analytic_surplus, analytic_profit, analytic_purchase,
                 z(stats.consumer_surplus, analytic_surplus),
                 z(stats.firm_profit, analytic_profit),
                 z(stats.purchase_probability, analytic_purchase)});
  table.emit(cfg.out, cfg.format);
  return 0;
}

void add_common_options(CLI::App* cmd, RunConfig& cfg, std::string& config_path) {
  cmd->add_option("--n", cfg.n, "number of firms");
  cmd->add_option("--mu", cfg.mu, "prior match probability in (0,1)");
  cmd->add_option("--c", cfg.c, "search cost in [0, mu)");
  cmd->add_option("--regime", cfg.regime, "hidden or posted")
      ->check(CLI::IsMember({"hidden", "posted"}));
  cmd->add_option("--seed", cfg.seed, "master seed (PANDORA_MARKET_SEED fallback)");
  cmd->add_option("--reps", cfg.reps, "simulation replications");
  cmd->add_option("--workers", cfg.workers, "worker threads (0 = auto)");
  cmd->add_option("--price-grid", cfg.price_grid, "price grid points");
  cmd->add_option("--support-grid", cfg.support_grid, "signal-support grid points");
  cmd->add_flag("--include-ternary", cfg.include_ternary,
                "search ternary effective-value lotteries too");
  cmd->add_option("--tolerance", cfg.tolerance, "certification tolerance");
  cmd->add_option("--out", cfg.out, "output file (stdout when omitted)");
  cmd->add_option("--format", cfg.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--n-min", cfg.n_min, "sweep start (welfare)");
  cmd->add_option("--n-max", cfg.n_max, "sweep end (welfare)");
  cmd->add_option("--config", config_path, "flat key=value config file");
  cmd->add_option("--test-corrupt-profit", cfg.corrupt_profit,
                  "testing hook: subtract from the certified profit constant")
      ->group("");  // hidden
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Directed-search market equilibria: computation, certification, simulation"};
  app.require_subcommand(1);

  RunConfig cfg;
  cfg.seed = default_seed_from_env();
  std::string config_path;

  CLI::App* equilibrium = app.add_subcommand(
      "equilibrium", "analytic equilibrium objects for one regime");
  CLI::App* verify = app.add_subcommand(
      "verify", "certify deviation-proofness of the posted equilibrium");
  CLI::App* welfare =
      app.add_subcommand("welfare", "welfare sweep over market sizes");
  CLI::App* simulate =
      app.add_subcommand("simulate", "seeded Monte-Carlo market simulation");
  for (CLI::App* cmd : {equilibrium, verify, welfare, simulate}) {
    add_common_options(cmd, cfg, config_path);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    CLI::App* cmd = app.get_subcommands().front();
    if (!config_path.empty()) apply_config_file(config_path, cmd, cfg);
    if (cmd == equilibrium) return cmd_equilibrium(cfg);
    if (cmd == verify) return cmd_verify(cfg);
    if (cmd == welfare) return cmd_welfare(cfg);
    return cmd_simulate(cfg);
  } catch (const pandora::MarketError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
