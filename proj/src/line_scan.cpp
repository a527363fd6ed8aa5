#include "rezeta/line_scan.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <complex>
#include <fstream>
#include <map>
#include <mutex>
#include <numbers>
#include <set>
#include <thread>

#include <json.hpp>

#include "rezeta/complex.hpp"
#include "rezeta/error.hpp"
#include "rezeta/kernel.hpp"
#include "rezeta/rootfind.hpp"

namespace rezeta::line {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

using Counter = std::atomic<long>;

double sample(double t, Counter& evals) {
  ++evals;
  return re_zeta_line(t);
}

Real polish_eval(const Real& t, const PrecisionContext& ctx, Counter& evals) {
  ++evals;
  return re_zeta_line(t, ctx);
}

// Crossing between a and b (f(a), f(b) of opposite signs, a < b): double
// refinement, then a 96-bit bracket around it narrowed to tol.
double refine_crossing(double a, double b, double tol, Counter& evals) {
  auto fd = [&](double t) { return sample(t, evals); };
  const double fast_tol = std::max(tol, 4.0 * std::nextafter(b, 2.0 * b) - 4.0 * b);
  const auto fast = rootfind::find_zero(fd, a, b, fast_tol);
  const double guess = 0.5 * (fast.bracket.lo + fast.bracket.hi);
  if (fast.bracket.exact_root) {
    return guess;
  }
  const bool rising = fd(a) < 0.0;
  --evals;

  const PrecisionContext ctx(kPolishBits);
  PrecisionScope scope(ctx.working_bits());
  auto fr = [&](const Real& t) { return polish_eval(t, ctx, evals); };
  // The double value can be off by ~1e-8 at t ~ 1e7; widen until the
  // high-precision signs bracket the crossing.
  double delta = 1e-7 * std::max(1.0, guess / 1e6);
  for (;;) {
    const double lo = std::max(a, guess - delta);
    const double hi = std::min(b, guess + delta);
    const Real rlo(lo), rhi(hi);
    const Real flo = fr(rlo);
    const Real fhi = fr(rhi);
    const bool bracketed = rising ? (flo.sign() < 0 && fhi.sign() > 0) : (flo.sign() > 0 && fhi.sign() < 0);
    if (flo.sign() == 0) {
      return lo;
    }
    if (fhi.sign() == 0) {
      return hi;
    }
    if (bracketed) {
      if (hi - lo <= tol) {
        return 0.5 * (lo + hi);
      }
      const auto fine = rootfind::find_zero(fr, rlo, rhi, Real(tol));
      return ((fine.bracket.lo + fine.bracket.hi) / Real(2)).to_double();
    }
    if (lo == a && hi == b) {
      throw InternalError("refine_crossing: no sign change at 96 bits on [" + std::to_string(a) + ", " +
                          std::to_string(b) + "]");
    }
    delta *= 10.0;
  }
}

// Golden-section search for the minimum of Re zeta(1+it) on [a, b].
double golden_minimum(double a, double b, double tol, Counter& evals) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = sample(c, evals);
  double fd = sample(d, evals);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = sample(c, evals);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = sample(d, evals);
    }
  }
  return fc < fd ? c : d;
}

NegativeWindow build_window(double s0, double s1, double e0, double e1, double tol, Counter& evals) {
  NegativeWindow w;
  w.t_start = refine_crossing(s0, s1, tol, evals);
  w.t_end = refine_crossing(e0, e1, tol, evals);
  if (!(w.t_start < w.t_end)) {
    throw InternalError("window assembly: endpoints out of order");
  }
  w.length = w.t_end - w.t_start;
  const double min_tol = std::max(tol, 1e-7);
  w.t_min = golden_minimum(w.t_start, w.t_end, min_tol, evals);
  w.t_min = std::clamp(w.t_min, std::nextafter(w.t_start, w.t_end), std::nextafter(w.t_end, w.t_start));
  const PrecisionContext ctx(kPolishBits);
  PrecisionScope scope(ctx.working_bits());
  w.min_value = polish_eval(Real(w.t_min), ctx, evals).to_double();
  if (!(w.min_value < 0.0)) {
    throw InternalError("window assembly: non-negative minimum at t = " + std::to_string(w.t_min));
  }
  return w;
}

struct Grid {
  double t_lo;
  double step;
  long samples;

  double at(long i) const { return t_lo + static_cast<double>(i) * step; }
};

Grid make_grid(double t_lo, double t_hi, double step) {
  if (!(step > 0.0) || step > kMaxCoarseStep) {
    throw DomainError("coarse step must lie in (0, 0.02]");
  }
  if (!(t_lo >= 1.0) || !(t_hi >= t_lo)) {
    throw DomainError("scan range must satisfy 1 <= t_lo <= t_hi");
  }
  if (t_hi > kernel::kMaxImaginaryPart) {
    throw CapacityError("scan range beyond t = 1e8");
  }
  const long n = static_cast<long>(std::floor((t_hi - t_lo) / step + 1e-9)) + 1;
  return {t_lo, step, n};
}

// Windows owned by samples [i0, i1): those whose first negative sample has
// an index in the range.
std::vector<NegativeWindow> chunk_windows(const Grid& g, long i0, long i1, double tol, Counter& evals) {
  std::vector<NegativeWindow> out;
  std::vector<double> values(static_cast<std::size_t>(i1 - i0));
  for (long i = i0; i < i1; ++i) {
    values[static_cast<std::size_t>(i - i0)] = sample(g.at(i), evals);
  }
  auto value = [&](long i) { return i >= i0 && i < i1 ? values[static_cast<std::size_t>(i - i0)] : sample(g.at(i), evals); };
  double prev = i0 == 0 ? 1.0 : value(i0 - 1);
  for (long i = i0; i < i1; ++i) {
    const double v = values[static_cast<std::size_t>(i - i0)];
    const bool starts = v < 0.0 && (prev >= 0.0 || i == 0);
    prev = v;
    if (!starts) {
      continue;
    }
    // Positive sample before the window; for index 0 walk back below t_lo.
    long back = i - 1;
    while (g.at(back) >= 1.0 && sample(g.at(back), evals) < 0.0) {
      --back;
    }
    long fwd = i + 1;
    while (value(fwd) < 0.0) {
      ++fwd;
    }
    out.push_back(build_window(g.at(back), g.at(back + 1), g.at(fwd - 1), g.at(fwd), tol, evals));
  }
  return out;
}

// certify_positive repeated over [a, b], stepping through spots where the
// headroom vanishes in small increments; those spots become holes.
void certify_cover(double a, double b, double margin, std::vector<CertifiedRange>& certified,
                   std::vector<std::pair<double, double>>& holes, Counter& evals) {
  a = std::max(a, 10.0);
  const double skip = 1e-3;
  double t = a;
  while (t < b) {
    CertifyOptions opt;
    opt.margin = margin;
    const auto r = certify_positive(t, b, opt);
    evals += r.evaluations;
    if (r.range.t_hi > r.range.t_lo) {
      certified.push_back({r.range.t_lo, r.range.t_hi, {}});
    }
    if (r.certified) {
      return;
    }
    double u = *r.t_fail;
    const double hole_start = u;
    while (u < b) {
      u = std::min(b, u + skip);
      ++evals;
      if (kHalfPi - std::abs(arg_zeta_line(u)) - margin > slope_bound(u) * opt.min_step) {
        break;
      }
    }
    holes.emplace_back(hole_start, u);
    t = u;
  }
}

nlohmann::json window_json(const NegativeWindow& w) {
  return {{"t_start", w.t_start}, {"t_end", w.t_end}, {"t_min", w.t_min}, {"min_value", w.min_value},
          {"length", w.length}};
}

NegativeWindow window_from_json(const nlohmann::json& j) {
  NegativeWindow w;
  w.t_start = j.at("t_start").get<double>();
  w.t_end = j.at("t_end").get<double>();
  w.t_min = j.at("t_min").get<double>();
  w.min_value = j.at("min_value").get<double>();
  w.length = j.at("length").get<double>();
  return w;
}

struct CheckpointState {
  long done_prefix = 0;
  std::set<long> done_extra;
  std::map<long, std::vector<NegativeWindow>> windows;
  long evaluations = 0;
  double wall_time = 0.0;

  bool done(long c) const { return c < done_prefix || done_extra.count(c) != 0; }

  void mark(long c) {
    done_extra.insert(c);
    while (done_extra.count(done_prefix) != 0) {
      done_extra.erase(done_prefix);
      ++done_prefix;
    }
  }
};

nlohmann::json checkpoint_json(const CheckpointState& s, double t_lo, double t_hi, const ScanOptions& o) {
  nlohmann::json windows = nlohmann::json::array();
  for (const auto& [chunk, list] : s.windows) {
    for (const auto& w : list) {
      auto j = window_json(w);
      j["chunk"] = chunk;
      windows.push_back(j);
    }
  }
  return {{"schema", 1},
          {"t_lo", t_lo},
          {"t_hi", t_hi},
          {"coarse_step", o.window.coarse_step},
          {"refine_tol", o.window.refine_tol},
          {"chunk_samples", o.chunk_samples},
          {"done_prefix", s.done_prefix},
          {"done_extra", s.done_extra},
          {"windows", windows},
          {"evaluations", s.evaluations},
          {"wall_time", s.wall_time}};
}

// Last parseable record matching the scan parameters; torn trailing lines
// from an interrupted write are skipped.
std::optional<CheckpointState> read_checkpoint(const std::string& path, double t_lo, double t_hi,
                                               const ScanOptions& o) {
  std::ifstream in(path);
  if (!in) {
    return std::nullopt;
  }
  std::optional<CheckpointState> found;
  std::string line;
  while (std::getline(in, line)) {
    const auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || j.value("schema", 0) != 1) {
      continue;
    }
    try {
      if (j.at("t_lo").get<double>() != t_lo || j.at("t_hi").get<double>() != t_hi ||
          j.at("coarse_step").get<double>() != o.window.coarse_step ||
          j.at("refine_tol").get<double>() != o.window.refine_tol ||
          j.at("chunk_samples").get<long>() != o.chunk_samples) {
        continue;
      }
      CheckpointState s;
      s.done_prefix = j.at("done_prefix").get<long>();
      for (const long c : j.at("done_extra")) {
        s.done_extra.insert(c);
      }
      for (const auto& w : j.at("windows")) {
        s.windows[w.at("chunk").get<long>()].push_back(window_from_json(w));
      }
      s.evaluations = j.at("evaluations").get<long>();
      s.wall_time = j.at("wall_time").get<double>();
      found = std::move(s);
    } catch (const nlohmann::json::exception&) {
      continue;
    }
  }
  return found;
}

}  // namespace

double slope_bound(double t) {
  if (!(t >= 10.0)) {
    throw DomainError("slope_bound: requires t >= 10");
  }
  return 0.75 * std::log(t * t + 4.0) + 7.0;
}

double re_zeta_line(double t) {
  if (t == 0.0) {
    throw PoleError("re_zeta_line: t = 0 is the pole", "1+0i");
  }
  return kernel::zeta_fast(1.0, t).real();
}

Real re_zeta_line(const Real& t, const PrecisionContext& ctx) {
  if (t.is_zero()) {
    throw PoleError("re_zeta_line: t = 0 is the pole", "1+0i");
  }
  return kernel::zeta_complex(ComplexValue(Real(1), t), ctx).re;
}

double arg_zeta_line(double t) { return std::arg(kernel::zeta_fast(1.0, t)); }

CertifyResult certify_positive(double t_lo, double t_hi, const CertifyOptions& options) {
  if (!(t_lo >= 10.0)) {
    throw DomainError("certify_positive: requires t_lo >= 10");
  }
  if (!(t_hi >= t_lo)) {
    throw DomainError("certify_positive: requires t_hi >= t_lo");
  }
  if (!(options.margin > 0.0) || !(options.margin < kHalfPi)) {
    throw DomainError("certify_positive: margin must lie in (0, pi/2)");
  }
  CertifyResult out;
  out.range.t_lo = t_lo;
  double t = t_lo;
  while (t < t_hi) {
    const double arg = arg_zeta_line(t);
    ++out.evaluations;
    const double headroom = kHalfPi - std::abs(arg) - options.margin;
    if (!(headroom > 0.0)) {
      out.t_fail = t;
      break;
    }
    const double h0 = headroom / slope_bound(t);
    const double h = std::min(headroom / slope_bound(t + h0), t_hi - t);
    if (h < options.min_step && t + h < t_hi) {
      out.t_fail = t;
      break;
    }
    if (options.record_steps) {
      out.range.step_log.push_back({t, arg, h});
    }
    t = t + h >= t_hi ? t_hi : t + h;
  }
  out.range.t_hi = t;
  out.certified = !out.t_fail.has_value();
  return out;
}

std::vector<NegativeWindow> find_negative_windows(double t_lo, double t_hi, const WindowOptions& options) {
  if (!(options.refine_tol > 0.0)) {
    throw DomainError("refine_tol must be positive");
  }
  const Grid g = make_grid(t_lo, t_hi, options.coarse_step);
  Counter evals{0};
  return chunk_windows(g, 0, g.samples, options.refine_tol, evals);
}

double empirical_d(const std::vector<NegativeWindow>& windows, double T) {
  if (!(T > 0.0)) {
    throw DomainError("empirical_d: T must be positive");
  }
  double total = 0.0;
  for (const auto& w : windows) {
    if (w.t_start < 0.0 || w.t_end > T) {
      throw DomainError("empirical_d: window beyond [0, T]");
    }
    total += w.length;
  }
  return total / T;
}

ScanReport scan(double t_lo, double t_hi, const ScanOptions& options) {
  if (!(options.window.refine_tol > 0.0)) {
    throw DomainError("refine_tol must be positive");
  }
  if (options.chunk_samples < 1) {
    throw DomainError("chunk_samples must be positive");
  }
  const Grid g = make_grid(t_lo, t_hi, options.window.coarse_step);
  const long chunks = (g.samples + options.chunk_samples - 1) / options.chunk_samples;
  const auto started = std::chrono::steady_clock::now();

  CheckpointState state;
  if (!options.checkpoint_path.empty()) {
    if (auto prior = read_checkpoint(options.checkpoint_path, t_lo, t_hi, options)) {
      state = std::move(*prior);
    }
  }
  const double prior_wall = state.wall_time;
  Counter evals{state.evaluations};
  std::mutex mutex;
  std::ofstream checkpoint;
  if (!options.checkpoint_path.empty()) {
    checkpoint.open(options.checkpoint_path, std::ios::app);
    if (!checkpoint) {
      throw Error("cannot open checkpoint file " + options.checkpoint_path);
    }
  }
  long last_record = evals.load();
  auto write_record = [&] {
    state.evaluations = evals.load();
    state.wall_time =
        prior_wall + std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    checkpoint << checkpoint_json(state, t_lo, t_hi, options).dump() << '\n';
    checkpoint.flush();
    last_record = state.evaluations;
  };

  std::vector<long> pending;
  for (long c = 0; c < chunks; ++c) {
    if (!state.done(c)) {
      pending.push_back(c);
    }
  }
  const long limit = options.max_chunks > 0 ? std::min<long>(options.max_chunks, static_cast<long>(pending.size()))
                                            : static_cast<long>(pending.size());
  std::atomic<long> next{0};
  std::exception_ptr failure;
  auto worker = [&] {
    for (;;) {
      const long k = next.fetch_add(1);
      if (k >= limit) {
        return;
      }
      {
        std::lock_guard lock(mutex);
        if (failure) {
          return;
        }
      }
      const long c = pending[static_cast<std::size_t>(k)];
      try {
        const long i0 = c * options.chunk_samples;
        const long i1 = std::min(g.samples, i0 + options.chunk_samples);
        auto found = chunk_windows(g, i0, i1, options.window.refine_tol, evals);
        std::lock_guard lock(mutex);
        if (!found.empty()) {
          state.windows[c] = std::move(found);
        }
        state.mark(c);
        if (checkpoint.is_open() && evals.load() - last_record >= options.checkpoint_interval) {
          write_record();
        }
      } catch (...) {
        std::lock_guard lock(mutex);
        if (!failure) {
          failure = std::current_exception();
        }
        return;
      }
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(std::max(1L, limit))));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < threads; ++i) {
      pool.emplace_back(worker);
    }
    for (auto& th : pool) {
      th.join();
    }
  }
  if (failure) {
    if (checkpoint.is_open()) {
      write_record();
    }
    std::rethrow_exception(failure);
  }
  if (checkpoint.is_open()) {
    write_record();
  }

  ScanReport report;
  report.t_lo = t_lo;
  report.t_hi = t_hi;
  report.chunks_total = chunks;
  report.chunks_done = state.done_prefix + static_cast<long>(state.done_extra.size());
  report.complete = report.chunks_done == chunks;
  for (const auto& [chunk, list] : state.windows) {
    report.windows.insert(report.windows.end(), list.begin(), list.end());
  }
  std::sort(report.windows.begin(), report.windows.end(),
            [](const NegativeWindow& a, const NegativeWindow& b) { return a.t_start < b.t_start; });
  for (std::size_t i = 1; i < report.windows.size(); ++i) {
    if (!(report.windows[i - 1].t_end < report.windows[i].t_start)) {
      throw InternalError("scan: overlapping windows at t = " + std::to_string(report.windows[i].t_start));
    }
  }
  if (report.complete && options.certify_gaps && t_hi > 10.0) {
    double from = t_lo;
    for (const auto& w : report.windows) {
      if (w.t_start > from) {
        certify_cover(from, std::min(w.t_start, t_hi), options.margin, report.certified, report.uncertified, evals);
      }
      from = std::max(from, w.t_end);
    }
    if (from < t_hi) {
      certify_cover(from, t_hi, options.margin, report.certified, report.uncertified, evals);
    }
  }
  report.evaluations = evals.load();
  double T = t_hi;
  for (const auto& w : report.windows) {
    T = std::max(T, w.t_end);
  }
  report.empirical_d = T > 0.0 ? empirical_d(report.windows, T) : 0.0;
  return report;
}

std::string format4(double x) {
  const double r = std::round(x * 1e4) / 1e4;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", r == 0.0 ? 0.0 : r);
  return buf;
}

const std::vector<TableRow>& reference_table() {
  static const std::vector<TableRow> rows = {
    {682112.9169, -0.0028, 0.0529},
    {1267065.1710, -0.0040, 0.0655},
    {1466782.0667, -0.0013, 0.0391},
    {1858650.0915, -0.0282, 0.1686},
    {2023654.7671, -0.0221, 0.1389},
    {2064996.2141, -0.0117, 0.1076},
    {2195056.7909, -0.0755, 0.2718},
    {2202620.3296, -0.0111, 0.1159},
    {2530662.6360, -0.0072, 0.0865},
    {3259774.5293, -0.0471, 0.2098},
    {3548283.4160, -0.0189, 0.1459},
    {4052438.9330, -0.0023, 0.0474},
    {4197235.0783, -0.0331, 0.1977},
    {5410820.7150, -0.0008, 0.0307},
    {6027913.8513, -0.0181, 0.1325},
    {6164063.0008, -0.0263, 0.1603},
    {6238849.4877, -0.0071, 0.0827},
    {6265907.4688, -0.0030, 0.0522},
    {6421627.2235, -0.0241, 0.1651},
    {7338152.4379, -0.0043, 0.0656},
    {7469838.9709, -0.0009, 0.0305},
    {7766995.0303, -0.0742, 0.2840},
    {7774558.3985, -0.0672, 0.2705},
    {7985493.9836, -0.0324, 0.1728},
    {8299958.2327, -0.0022, 0.0432},
    {8350473.4853, -0.0019, 0.0451},
    {8366684.0439, -0.0197, 0.1322},
    {8452317.9526, -0.0090, 0.0900},
    {8967566.5926, -0.0148, 0.1336},
    {9960968.8748, -0.0184, 0.1373},
    {11231380.7309, -0.0099, 0.1042},
    {11236680.3350, -0.0262, 0.1595},
    {11781932.0257, -0.0170, 0.1288},
    {11884021.9776, -0.0035, 0.0564},
    {12045289.3337, -0.0644, 0.2498},
    {12276788.1573, -0.0182, 0.1476},
    {12546625.7916, -0.0455, 0.2031},
    {12781127.5748, -0.0102, 0.0964},
    {13598773.5889, -0.0543, 0.2317},
    {13786262.5457, -0.0826, 0.2635},
    {13922411.7750, -0.0222, 0.1418},
    {14190358.4974, -0.0632, 0.2214},
    {14391623.0217, -0.0016, 0.0437},
    {14788310.5330, -0.0149, 0.1132},
    {14856540.3430, -0.0220, 0.1442},
    {15173904.7533, -0.0041, 0.0800},
    {15321273.7219, -0.0131, 0.1181},
    {16083163.0244, -0.0098, 0.1038},
    {16503899.3235, -0.0060, 0.0680},
    {16656258.8346, -0.0155, 0.1329},
  };
  return rows;
}

}  // namespace rezeta::line
