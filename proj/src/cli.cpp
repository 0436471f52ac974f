#include "qos/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qos/config.hpp"
#include "qos/http_service.hpp"
#include "qos/metrics.hpp"
#include "qos/pricing.hpp"
#include "qos/service.hpp"
#include "qos/sim.hpp"

namespace qos {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::optional<std::uint64_t> env_seed() {
  const char* s = std::getenv("QOSSIM_SEED");
  if (!s || !*s) return std::nullopt;
  char* end = nullptr;
  unsigned long long v = std::strtoull(s, &end, 10);
  if (end == s || *end != '\0') {
    throw std::invalid_argument("QOSSIM_SEED must be an unsigned integer");
  }
  return static_cast<std::uint64_t>(v);
}

SlowdownHook parse_slowdown(const std::string& model) {
  if (model.empty() || model == "none") return {};
  const std::string prefix = "linear:";
  if (model.rfind(prefix, 0) == 0) {
    double k = std::stod(model.substr(prefix.size()));
    if (k < 0.0) throw std::invalid_argument("slowdown factor must be >= 0");
    return [k](double load) { return 1.0 + k * load; };
  }
  throw std::invalid_argument("unknown slowdown model: " + model +
                              " (expected none or linear:<k>)");
}

void print_menu(std::ostream& out, const OptimizedMenu& opt) {
  for (const auto& t : opt.menu.tiers) {
    out << to_string(t.tier) << " " << fmt(t.completion_minutes)
        << " minutes on " << t.nodes << " nodes price " << fmt(t.price)
        << "\n";
  }
  out << "expected_revenue_per_arrival " << fmt(opt.expected_revenue) << "\n";
}

void print_summary(std::ostream& out, const std::vector<SweepRow>& rows) {
  auto bench = pooled_summary(rows, StrategyKind::bench);
  auto revop = pooled_summary(rows, StrategyKind::revop);
  struct Line {
    const char* name;
    PooledStat StrategySummary::*field;
  };
  const Line lines[] = {
      {"revenue", &StrategySummary::revenue},
      {"net_utility", &StrategySummary::net_utility},
      {"utilization", &StrategySummary::utilization},
      {"node_periods", &StrategySummary::node_periods},
      {"success_rate", &StrategySummary::success_rate},
      {"max_load", &StrategySummary::max_load},
      {"admission_rate", &StrategySummary::admission_rate},
  };
  out << "pooled over " << rows.size()
      << " paired runs (mean +- 95% CI)\n";
  for (const auto& line : lines) {
    const auto& b = bench.*(line.field);
    const auto& r = revop.*(line.field);
    out << line.name << " bench " << fmt(b.mean) << " +- " << fmt(b.half_ci95)
        << " | revop " << fmt(r.mean) << " +- " << fmt(r.half_ci95) << "\n";
  }
  out << "revenue gain by capacity (mean +- SE across IATs)\n";
  for (const auto& g : paired_gains(rows)) {
    out << "  capacity " << g.capacity << " ";
    if (g.revenue.defined) {
      out << fmt(g.revenue.mean) << " +- " << fmt(g.revenue.se) << "\n";
    } else {
      out << "undefined\n";
    }
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"completion-time pricing engine and cluster simulator"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "JSON experiment config file");

  auto* calibrate = app.add_subcommand(
      "calibrate", "Derive the revenue-maximizing fixed per-node-minute rate");

  std::string job_name;
  double quote_contention = 0.0;
  auto* quote = app.add_subcommand(
      "quote", "Print the optimized price menu for one job type");
  quote->add_option("--job", job_name, "job type name from the catalog")
      ->required();
  quote->add_option("--contention", quote_contention,
                    "contention level for the price premium");

  std::string out_path;
  int seed_count = 0;
  int parallel = 1;
  double premium_slope = -1.0;
  std::string slowdown_model;
  auto* sweep = app.add_subcommand(
      "sweep", "Run the paired pricing sweep and write per-run CSV");
  sweep->add_option("--out", out_path, "CSV output path");
  sweep->add_option("--seeds", seed_count, "number of seeds, overriding config");
  sweep->add_option("--parallel", parallel, "worker threads")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--premium-slope", premium_slope,
                    "contention premium slope");
  sweep->add_option("--slowdown", slowdown_model,
                    "slowdown hook: none or linear:<k>");

  int port = 0;
  int capacity = -1;
  auto* serve = app.add_subcommand("serve", "Start the quote/contract service");
  serve->add_option("--port", port, "listen port");
  serve->add_option("--capacity", capacity, "cluster capacity");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    ExperimentConfig cfg =
        config_path.empty() ? default_config() : load_config(config_path);
    validate(cfg);

    if (calibrate->parsed()) {
      FixedPrice fp = calibrate_fixed_price(cfg.catalog, cfg.mix, cfg.pricing);
      out << "bench_rate " << fmt(fp.rate) << "\n";
      out << "expected_revenue_per_arrival " << fmt(fp.expected_revenue)
          << "\n";
      return 0;
    }

    if (quote->parsed()) {
      const JobType* job = find_job(cfg.catalog, job_name);
      if (!job) throw std::invalid_argument("unknown job type: " + job_name);
      TierLayout tiers{job->fast, job->slow};
      out << "job " << job->name << "\n";
      print_menu(out,
                 optimize_menu(cfg.mix, tiers, cfg.pricing, quote_contention));
      return 0;
    }

    if (sweep->parsed()) {
      if (premium_slope >= 0.0) {
        cfg.pricing.contention_premium_slope = premium_slope;
      }
      auto base = env_seed();
      if (seed_count > 0) {
        std::uint64_t s0 = base.value_or(
            cfg.sweep.seeds.empty() ? 1 : cfg.sweep.seeds.front());
        cfg.sweep.seeds.clear();
        for (int i = 0; i < seed_count; ++i) cfg.sweep.seeds.push_back(s0 + i);
      } else if (base) {
        std::size_t n = cfg.sweep.seeds.size();
        cfg.sweep.seeds.clear();
        for (std::size_t i = 0; i < n; ++i) cfg.sweep.seeds.push_back(*base + i);
      }
      validate(cfg.sweep);
      SlowdownHook hook = parse_slowdown(slowdown_model);
      auto result = run_sweep(cfg.sweep, cfg.mix, cfg.catalog, cfg.pricing,
                              hook, parallel);
      auto rows = build_rows(result, cfg.sweep.horizon_s);
      std::string path = out_path.empty() ? cfg.output_path : out_path;
      emit_csv(rows, path);
      out << "bench_rate " << fmt(result.bench_rate.rate) << "\n";
      print_summary(out, rows);
      out << "wrote " << path << "\n";
      return 0;
    }

    if (serve->parsed()) {
      if (port > 0) cfg.service.port = port;
      if (capacity >= 0) cfg.service.capacity = capacity;
      validate(cfg);
      QuoteService service(cfg.service, cfg.mix, cfg.catalog, cfg.pricing);
      HttpQuoteServer server(service);
      out << "listening on 0.0.0.0:" << cfg.service.port << " capacity "
          << cfg.service.capacity << "\n";
      if (!server.listen("0.0.0.0", cfg.service.port)) {
        err << "error: failed to listen on port " << cfg.service.port << "\n";
        return 1;
      }
      return 0;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace qos
