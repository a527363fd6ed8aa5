#pragma once

// Sign structure of Re zeta(1+it): negative windows, positivity
// certificates from a bound on the slope of arg zeta(1+it), and chunked
// scans with checkpoint/resume.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rezeta/real.hpp"

namespace rezeta::line {

/// Precision used when polishing endpoints and minimum values.
inline constexpr long kPolishBits = 96;
inline constexpr double kMaxCoarseStep = 0.02;

/// (3/4) log(t^2 + 4) + 7, an upper bound for |d/dt arg zeta(1+it)| when t >= 10.
double slope_bound(double t);

/// Re zeta(1+it) in double precision (dense sampling path).
double re_zeta_line(double t);
/// Re zeta(1+it) at the context precision.
Real re_zeta_line(const Real& t, const PrecisionContext& ctx);
/// Principal argument of zeta(1+it), double precision.
double arg_zeta_line(double t);

struct NegativeWindow {
  double t_start = 0.0;
  double t_end = 0.0;
  double t_min = 0.0;
  double min_value = 0.0;
  double length = 0.0;
};

struct CertStep {
  double t = 0.0;
  double arg = 0.0;
  double step = 0.0;
};

struct CertifiedRange {
  double t_lo = 0.0;
  double t_hi = 0.0;
  std::vector<CertStep> step_log;
};

struct CertifyOptions {
  double margin = 0.05;
  double min_step = 1e-6;
  bool record_steps = false;
};

struct CertifyResult {
  bool certified = false;
  /// [t_lo, t) proven positive; t == t_hi on success.
  CertifiedRange range;
  /// First point where the headroom vanished or the step underflowed.
  std::optional<double> t_fail;
  long evaluations = 0;
};

/// Walks from t_lo in steps h = (pi/2 - |arg| - margin) / slope_bound(t + h0),
/// h0 being the same quotient with the bound at t. Every step keeps
/// |arg zeta(1+it')| < pi/2 - margin on [t, t+h], so Re zeta > 0 there.
/// The margin also absorbs the rounding error of the double evaluation.
CertifyResult certify_positive(double t_lo, double t_hi, const CertifyOptions& options = {});

struct WindowOptions {
  double coarse_step = 0.01;
  double refine_tol = 1e-8;
};

/// All windows whose first negative coarse sample lies in [t_lo, t_hi].
/// Windows that run past either end are followed to their true endpoints.
std::vector<NegativeWindow> find_negative_windows(double t_lo, double t_hi, const WindowOptions& options = {});

/// (sum of lengths) / T. Throws DomainError if a window ends beyond T.
double empirical_d(const std::vector<NegativeWindow>& windows, double T);

struct ScanOptions {
  WindowOptions window;
  /// Coarse samples per chunk.
  long chunk_samples = 2000;
  unsigned threads = 1;
  /// Append-only JSON-lines checkpoint; empty disables checkpointing.
  std::string checkpoint_path;
  long checkpoint_interval = 10000;
  /// Run certify_positive on the gaps between windows.
  bool certify_gaps = false;
  double margin = 0.05;
  /// Stop after this many newly finished chunks (0 = no limit). Used to
  /// simulate an interrupted run.
  long max_chunks = 0;
};

struct ScanReport {
  double t_lo = 0.0;
  double t_hi = 0.0;
  std::vector<NegativeWindow> windows;
  std::vector<CertifiedRange> certified;
  /// Gaps where certification stopped: [t_fail, next window start or t_hi].
  std::vector<std::pair<double, double>> uncertified;
  long evaluations = 0;
  /// empirical_d with T = t_hi.
  double empirical_d = 0.0;
  bool complete = true;
  long chunks_total = 0;
  long chunks_done = 0;
};

/// Chunked, optionally threaded, resumable scan of [t_lo, t_hi]. If the
/// checkpoint file holds a record for the same range and grid, finished
/// chunks are taken from it.
ScanReport scan(double t_lo, double t_hi, const ScanOptions& options = {});

struct TableRow {
  double t;
  double re_zeta;
  double length;
};

/// The first 50 negative local minima of Re zeta(1+it) as published,
/// rounded to 4 decimals.
const std::vector<TableRow>& reference_table();
/// Sum of the lengths of the first 50 windows, 8 decimals.
inline constexpr double kReferenceLengthSum = 6.48390168;

/// x rounded half away from zero to 4 decimals, printed with exactly 4.
std::string format4(double x);

}  // namespace rezeta::line
