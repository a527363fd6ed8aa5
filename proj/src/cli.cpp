#include "rezeta/cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <json.hpp>

#include "rezeta/error.hpp"
#include "rezeta/line_scan.hpp"
#include "rezeta/mc.hpp"
#include "rezeta/prime_zeta.hpp"
#include "rezeta/sigma0.hpp"

namespace rezeta::cli {

namespace {

using json = nlohmann::ordered_json;

constexpr const char* kCsvHeader = "t_min,re_zeta_min,t_start,t_end,length";

struct Common {
  std::string emit = "text";
  std::string output;
  unsigned threads = 1;
};

std::string fixed(double x, int decimals) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(decimals) << x;
  return s.str();
}

unsigned env_threads(unsigned fallback) {
  if (const char* v = std::getenv("REZETA_THREADS"); v != nullptr && *v != '\0') {
    char* end = nullptr;
    const long n = std::strtol(v, &end, 10);
    if (end == v || *end != '\0' || n < 1 || n > 4096) {
      throw DomainError("REZETA_THREADS must be a positive integer");
    }
    return static_cast<unsigned>(n);
  }
  return fallback;
}

std::string checkpoint_path(const std::string& given) {
  if (given.empty()) {
    return given;
  }
  const std::filesystem::path p(given);
  if (const char* dir = std::getenv("REZETA_CHECKPOINT_DIR"); dir != nullptr && *dir != '\0' && p.is_relative()) {
    return (std::filesystem::path(dir) / p).string();
  }
  return given;
}

json window_json(const line::NegativeWindow& w) {
  return {{"t_start", w.t_start}, {"t_end", w.t_end}, {"t_min", w.t_min}, {"min_value", w.min_value},
          {"length", w.length}};
}

void write_csv(std::ostream& os, const std::vector<line::NegativeWindow>& windows) {
  os << kCsvHeader << '\n';
  for (const auto& w : windows) {
    os << line::format4(w.t_min) << ',' << line::format4(w.min_value) << ',' << line::format4(w.t_start) << ','
       << line::format4(w.t_end) << ',' << line::format4(w.length) << '\n';
  }
}

json report_json(const line::ScanReport& r) {
  json windows = json::array();
  for (const auto& w : r.windows) {
    windows.push_back(window_json(w));
  }
  json certified = json::array();
  for (const auto& c : r.certified) {
    certified.push_back({{"t_lo", c.t_lo}, {"t_hi", c.t_hi}});
  }
  json holes = json::array();
  for (const auto& [a, b] : r.uncertified) {
    holes.push_back({{"t_lo", a}, {"t_hi", b}});
  }
  return {{"schema", 1},       {"t_lo", r.t_lo},           {"t_hi", r.t_hi},
          {"windows", windows}, {"certified", certified},   {"uncertified", holes},
          {"evaluations", r.evaluations}, {"empirical_d", r.empirical_d}, {"complete", r.complete}};
}

void write_windows_text(std::ostream& os, const std::vector<line::NegativeWindow>& windows) {
  for (const auto& w : windows) {
    os << "window (" << fixed(w.t_start, 8) << ", " << fixed(w.t_end, 8) << ") length " << fixed(w.length, 8)
       << " min " << fixed(w.min_value, 7) << " at t = " << fixed(w.t_min, 4) << '\n';
  }
}

void add_emit(CLI::App* app, Common& c, std::vector<std::string> formats) {
  app->add_option("--emit", c.emit, "Output format")->check(CLI::IsMember(std::move(formats)));
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sign of Re zeta on and near the line sigma = 1", "rezeta"};
  app.require_subcommand(1);
  Common common;
  app.add_option("-o,--output", common.output, "Write results to this file instead of stdout");
  app.add_option("--threads", common.threads, "Worker threads (REZETA_THREADS overrides)")->check(CLI::PositiveNumber);

  // sigma0
  long digits = 30;
  std::string method = "logzeta";
  std::string strategy = "hybrid";
  auto* s0 = app.add_subcommand("sigma0", "Compute sigma_0 to D decimals");
  s0->add_option("--digits", digits, "Decimal digits")->check(CLI::Range(1L, sigma0::kMaxDigits));
  s0->add_option("--method", method, "Series for f(sigma)")->check(CLI::IsMember({"arcsin", "logzeta"}));
  s0->add_option("--strategy", strategy, "Root-finding strategy")->check(CLI::IsMember({"bisect", "hybrid", "convex"}));
  add_emit(s0, common, {"text", "json"});

  // prime-zeta
  std::string pz_sigma;
  long pz_digits = 30;
  auto* pz = app.add_subcommand("prime-zeta", "P(sigma) = sum over primes of p^-sigma");
  pz->add_option("--sigma", pz_sigma, "sigma >= 1.05 (decimal string)")->required();
  pz->add_option("--digits", pz_digits, "Decimal digits")->check(CLI::Range(1L, sigma0::kMaxDigits));
  add_emit(pz, common, {"text", "json"});

  // scan
  double from = 0.0, to = 0.0, coarse = 0.01, refine = 1e-8, margin = 0.05;
  std::string checkpoint;
  bool certify_gaps = false;
  long chunk_samples = 2000;
  auto* sc = app.add_subcommand("scan", "Find negative windows of Re zeta(1+it)");
  sc->add_option("--from", from, "Start of the t range")->required();
  sc->add_option("--to", to, "End of the t range")->required();
  sc->add_option("--coarse-step", coarse, "Coarse sampling step (<= 0.02)");
  sc->add_option("--refine-tol", refine, "Endpoint tolerance");
  sc->add_option("--checkpoint", checkpoint, "Append-only checkpoint file (resumes if present)");
  sc->add_option("--chunk-samples", chunk_samples, "Coarse samples per chunk")->check(CLI::PositiveNumber);
  sc->add_flag("--certify-gaps", certify_gaps, "Certify positivity between windows");
  sc->add_option("--margin", margin, "Angular margin for gap certification");
  add_emit(sc, common, {"text", "csv", "json"});

  // certify
  auto* ce = app.add_subcommand("certify", "Certify Re zeta(1+it) > 0 on a range");
  ce->add_option("--from", from, "Start (>= 10)")->required();
  ce->add_option("--to", to, "End")->required();
  ce->add_option("--margin", margin, "Angular margin in radians");
  add_emit(ce, common, {"text", "json"});

  // mc
  mc::ModelConfig mc_cfg;
  std::optional<std::uint32_t> cutoff;
  auto* mcc = app.add_subcommand("mc", "Monte Carlo estimate of d(sigma) in the random Euler product model");
  mcc->add_option("--sigma", mc_cfg.sigma, "sigma >= 1")->required();
  mcc->add_option("--trials", mc_cfg.trials, "Number of trials")->required();
  mcc->add_option("--seed", mc_cfg.seed, "RNG seed")->required();
  mcc->add_option("--streams", mc_cfg.streams, "Independent RNG streams");
  mcc->add_option("--cutoff", cutoff, "Largest prime in the model (default 1e5 for sigma <= 1.05, else 1e4)");
  mcc->add_option("--threshold", mc_cfg.threshold, "Count Re Z < threshold (default 0)");
  add_emit(mcc, common, {"text", "json"});

  // table
  long rows = 5;
  bool long_run = false;
  auto* tb = app.add_subcommand("table", "Reproduce the first negative windows in table form");
  tb->add_option("--rows", rows, "Number of rows (1..50)")->check(CLI::Range(1L, 50L));
  tb->add_flag("--long-run", long_run, "Scan the whole range from t = 10 instead of +-0.5 around known rows");
  tb->add_option("--checkpoint", checkpoint, "Checkpoint file for --long-run");
  tb->add_option("--coarse-step", coarse, "Coarse sampling step (<= 0.02)");
  add_emit(tb, common, {"csv", "json", "text"});
  tb->callback([&] {
    if (tb->count("--emit") == 0) {
      common.emit = "csv";
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    const unsigned threads = env_threads(common.threads);
    std::ofstream file;
    if (!common.output.empty()) {
      file.open(common.output);
      if (!file) {
        err << "rezeta: cannot open " << common.output << '\n';
        return kExitComputation;
      }
    }
    std::ostream& os = common.output.empty() ? out : file;

    if (*s0) {
      const auto r = sigma0::solve_sigma0(digits, sigma0::method_from_string(method),
                                          rootfind::strategy_from_string(strategy));
      PrecisionScope scope(r.bits + 32);
      const std::string width = r.enclosure.width().to_scientific(3);
      if (common.emit == "json") {
        os << json{{"schema", 1},
                   {"sigma0", r.value},
                   {"digits", r.digits},
                   {"bits", r.bits},
                   {"enclosure", {r.enclosure.lo.to_fixed(static_cast<int>(digits) + 5),
                                  r.enclosure.hi.to_fixed(static_cast<int>(digits) + 5)}},
                   {"enclosure_width", width},
                   {"evaluations", r.evaluations},
                   {"iterations", r.iterations},
                   {"correctly_rounded", r.correctly_rounded},
                   {"certified", r.certified},
                   {"method", sigma0::to_string(r.method)},
                   {"strategy", rootfind::to_string(r.strategy)}}
                  .dump(2)
           << '\n';
      } else {
        os << r.value << '\n'
           << "enclosure width " << width << ", " << r.evaluations << " evaluations of f"
           << (r.correctly_rounded ? "" : " (enclosure straddles a rounding boundary)") << '\n';
      }
    } else if (*pz) {
      const PrecisionContext ctx = PrecisionContext::from_digits(pz_digits);
      PrecisionScope scope(ctx.working_bits());
      const Real sigma = Real::parse(pz_sigma);
      const Real eps = pow(Real(10), -(pz_digits + 2));
      const auto v = primes::prime_zeta(sigma, eps, ctx);
      const std::string text = v.value.to_fixed(static_cast<int>(pz_digits));
      if (common.emit == "json") {
        os << json{{"schema", 1}, {"sigma", pz_sigma}, {"value", text}, {"error_bound", eps.to_scientific(3)},
                   {"terms", v.terms}}
                  .dump(2)
           << '\n';
      } else {
        os << text << '\n';
      }
    } else if (*sc) {
      line::ScanOptions opt;
      opt.window.coarse_step = coarse;
      opt.window.refine_tol = refine;
      opt.threads = threads;
      opt.checkpoint_path = checkpoint_path(checkpoint);
      opt.chunk_samples = chunk_samples;
      opt.certify_gaps = certify_gaps;
      opt.margin = margin;
      const auto r = line::scan(from, to, opt);
      if (common.emit == "csv") {
        write_csv(os, r.windows);
      } else if (common.emit == "json") {
        os << report_json(r).dump(2) << '\n';
      } else {
        write_windows_text(os, r.windows);
        os << r.windows.size() << " window(s), " << r.evaluations << " zeta evaluations\n";
        for (const auto& [a, b] : r.uncertified) {
          os << "uncertified (" << fixed(a, 6) << ", " << fixed(b, 6) << ")\n";
        }
      }
    } else if (*ce) {
      line::CertifyOptions opt;
      opt.margin = margin;
      const auto r = line::certify_positive(from, to, opt);
      if (common.emit == "json") {
        json j{{"schema", 1},         {"t_lo", from}, {"t_hi", to}, {"margin", margin},
               {"certified", r.certified}, {"reached", r.range.t_hi}, {"evaluations", r.evaluations}};
        j["t_fail"] = r.t_fail ? json(*r.t_fail) : json(nullptr);
        os << j.dump(2) << '\n';
      } else if (r.certified) {
        os << "Re zeta(1+it) > 0 certified on [" << fixed(from, 6) << ", " << fixed(to, 6) << "], "
           << r.evaluations << " steps\n";
      } else {
        os << "certification stopped at t = " << fixed(*r.t_fail, 6) << " (headroom exhausted), "
           << r.evaluations << " steps\n";
      }
    } else if (*mcc) {
      mc_cfg.prime_cutoff = cutoff.value_or(mc::default_cutoff(mc_cfg.sigma));
      mc_cfg.threads = threads;
      const auto s = mc::estimate_d(mc_cfg);
      if (common.emit == "json") {
        os << json{{"schema", 1},
                   {"config",
                    {{"sigma", mc_cfg.sigma},
                     {"prime_cutoff", mc_cfg.prime_cutoff},
                     {"trials", mc_cfg.trials},
                     {"seed", mc_cfg.seed},
                     {"streams", mc_cfg.streams},
                     {"threshold", mc_cfg.threshold}}},
                   {"trials", s.trials},
                   {"negative_hits", s.negative_hits},
                   {"mean", s.mean},
                   {"variance", s.variance},
                   {"variance_re", s.variance_re},
                   {"mean_abs2", s.mean_abs2},
                   {"d_hat", s.d_hat},
                   {"ci95", {s.ci_lo, s.ci_hi}},
                   {"ci_method", s.ci_method},
                   {"diagnostics", {{"prime_count", s.prime_count}, {"tail_log_rms", s.tail_log_rms}}},
                   {"degenerate", s.degenerate}}
                  .dump(2)
           << '\n';
      } else {
        os << "d_hat " << s.d_hat << " (" << s.negative_hits << " of " << s.trials << "), 95% CI [" << s.ci_lo
           << ", " << s.ci_hi << "] " << s.ci_method << '\n'
           << "mean Re Z " << s.mean << ", variance " << s.variance << ", mean |Z|^2 " << s.mean_abs2 << '\n';
      }
    } else if (*tb) {
      const auto& ref = line::reference_table();
      std::vector<line::NegativeWindow> found;
      if (long_run) {
        line::ScanOptions opt;
        opt.window.coarse_step = coarse;
        opt.threads = threads;
        opt.checkpoint_path = checkpoint_path(checkpoint);
        const auto r = line::scan(10.0, ref[static_cast<std::size_t>(rows - 1)].t + 0.5, opt);
        found = r.windows;
      } else {
        for (long i = 0; i < rows; ++i) {
          const double t = ref[static_cast<std::size_t>(i)].t;
          line::WindowOptions opt;
          opt.coarse_step = coarse;
          auto w = line::find_negative_windows(t - 0.5, t + 0.5, opt);
          found.insert(found.end(), w.begin(), w.end());
        }
      }
      if (common.emit == "csv") {
        write_csv(os, found);
      } else if (common.emit == "json") {
        json windows = json::array();
        for (const auto& w : found) {
          windows.push_back(window_json(w));
        }
        double total = 0.0;
        for (const auto& w : found) {
          total += w.length;
        }
        os << json{{"schema", 1}, {"rows", rows}, {"long_run", long_run}, {"windows", windows},
                   {"sum_of_lengths", total}}
                  .dump(2)
           << '\n';
      } else {
        write_windows_text(os, found);
      }
    }
    os.flush();
    return kExitOk;
  } catch (const Error& e) {
    err << "rezeta: " << e.what() << '\n';
    return kExitComputation;
  } catch (const std::exception& e) {
    err << "rezeta: internal error: " << e.what() << '\n';
    return kExitComputation;
  }
}

}  // namespace rezeta::cli
