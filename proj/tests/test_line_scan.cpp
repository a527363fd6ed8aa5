#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "rezeta/error.hpp"
#include "rezeta/line_scan.hpp"

using namespace rezeta;
using namespace rezeta::line;

namespace {

bool same_windows(const std::vector<NegativeWindow>& a, const std::vector<NegativeWindow>& b) {
  if (a.size() != b.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].t_start != b[i].t_start || a[i].t_end != b[i].t_end || a[i].t_min != b[i].t_min ||
        a[i].min_value != b[i].min_value) {
      return false;
    }
  }
  return true;
}

std::filesystem::path temp_file(const char* name) {
  auto p = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove(p);
  return p;
}

}  // namespace

TEST_CASE("slope bound") {
  CHECK(slope_bound(10.0) == doctest::Approx(0.75 * std::log(104.0) + 7.0));
  // 0.75 * 4.644391 + 7 and 0.75 * 26.865901 + 7
  CHECK(slope_bound(10.0) == doctest::Approx(10.483293).epsilon(1e-6));
  CHECK(slope_bound(682113.0) == doctest::Approx(27.149426).epsilon(1e-6));
  double prev = slope_bound(10.0);
  for (double t = 11.0; t < 1e7; t *= 1.7) {
    CHECK(slope_bound(t) > prev);
    prev = slope_bound(t);
  }
  CHECK_THROWS_AS(slope_bound(9.99), DomainError);
}

TEST_CASE("Re zeta on the line at table locations") {
  CHECK(std::abs(re_zeta_line(682112.9169) + 0.0028) < 5e-5);
  CHECK(std::abs(re_zeta_line(1267065.1710) + 0.0040) < 5e-5);
  CHECK(std::abs(re_zeta_line(1e-7) - 0.5772156649) < 1e-6);
  const PrecisionContext ctx(kPolishBits);
  PrecisionScope s(ctx.working_bits());
  CHECK(std::abs(re_zeta_line(Real(682112.9169), ctx).to_double() + 0.0027652) < 1e-6);
  CHECK_THROWS_AS(re_zeta_line(0.0), PoleError);
}

TEST_CASE("certification agrees with dense sampling") {
  const auto r = certify_positive(10.0, 1000.0);
  REQUIRE(r.certified);
  CHECK(r.range.t_hi == 1000.0);
  // Independent oracle: Re zeta(1+it) sampled every 0.01 stays above 0.01.
  double lowest = 1.0;
  for (long i = 0; i <= 99000; ++i) {
    lowest = std::min(lowest, re_zeta_line(10.0 + 0.01 * static_cast<double>(i)));
  }
  CHECK(lowest > 0.01);
}

TEST_CASE("certification steps respect the slope bound") {
  CertifyOptions opt;
  opt.record_steps = true;
  const auto r = certify_positive(100.0, 200.0, opt);
  REQUIRE(r.certified);
  REQUIRE(!r.range.step_log.empty());
  for (const auto& st : r.range.step_log) {
    const double headroom = M_PI / 2.0 - std::abs(st.arg) - opt.margin;
    CHECK(st.step * slope_bound(st.t + st.step) <= headroom * (1.0 + 1e-12));
  }
}

TEST_CASE("certification never covers a known window") {
  const auto r = certify_positive(682112.0, 682113.0);
  CHECK_FALSE(r.certified);
  REQUIRE(r.t_fail.has_value());
  CHECK(*r.t_fail >= 682112.5);
  CHECK(*r.t_fail <= 682112.8913);
  const auto empty = certify_positive(50.0, 50.0);
  CHECK(empty.certified);
  CHECK_THROWS_AS(certify_positive(5.0, 20.0), DomainError);
}

TEST_CASE("no windows below t = 100") {
  CHECK(find_negative_windows(10.0, 100.0).empty());
  WindowOptions bad;
  bad.coarse_step = 0.05;
  CHECK_THROWS_AS(find_negative_windows(10.0, 100.0, bad), DomainError);
}

TEST_CASE("first window: endpoints, length and minimum") {
  const auto windows = find_negative_windows(682112.5, 682113.5);
  REQUIRE(windows.size() == 1);
  const auto& w = windows[0];
  CHECK(std::abs(w.t_start - 682112.89133824) < 1e-6);
  CHECK(std::abs(w.t_end - 682112.94425049) < 1e-6);
  CHECK(std::abs(w.length - 0.05291225) < 2e-6);
  CHECK(std::abs(w.min_value + 0.0027652) < 2e-6);
  CHECK(std::abs(w.t_min - 682112.9169) < 1e-3);
  CHECK(w.t_start < w.t_min);
  CHECK(w.t_min < w.t_end);

  // Endpoint correctness at delta = 2 * refine_tol, evaluated at 96 bits.
  const PrecisionContext ctx(kPolishBits);
  PrecisionScope s(ctx.working_bits());
  const double delta = 2e-8;
  CHECK(re_zeta_line(Real(w.t_start - delta), ctx) > 0.0);
  CHECK(re_zeta_line(Real(w.t_start + delta), ctx) < 0.0);
  CHECK(re_zeta_line(Real(w.t_end - delta), ctx) < 0.0);
  CHECK(re_zeta_line(Real(w.t_end + delta), ctx) > 0.0);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> inside(w.t_start, w.t_end);
  for (int i = 0; i < 20; ++i) {
    CHECK(w.min_value <= re_zeta_line(inside(rng)) + 1e-9);
  }
}

TEST_CASE("scan resumes from a checkpoint to the same windows" * doctest::timeout(600)) {
  const auto path = temp_file("rezeta_resume_test.jsonl");
  ScanOptions opt;
  opt.chunk_samples = 60;
  opt.checkpoint_interval = 1;
  const auto full = scan(682110.8, 682113.2, opt);
  REQUIRE(full.windows.size() == 1);

  opt.checkpoint_path = path.string();
  opt.max_chunks = 2;
  const auto partial = scan(682110.8, 682113.2, opt);
  CHECK_FALSE(partial.complete);
  {
    std::ofstream torn(path, std::ios::app);
    torn << "{\"schema\":1,\"t_lo\":6821";  // an interrupted write
  }
  opt.max_chunks = 0;
  const auto resumed = scan(682110.8, 682113.2, opt);
  CHECK(resumed.complete);
  CHECK(same_windows(full.windows, resumed.windows));
  CHECK(resumed.evaluations > partial.evaluations);
  std::filesystem::remove(path);
}

TEST_CASE("threaded scan matches the sequential one") {
  ScanOptions opt;
  opt.chunk_samples = 25;
  const auto one = scan(682112.6, 682113.2, opt);
  opt.threads = 3;
  const auto three = scan(682112.6, 682113.2, opt);
  CHECK(same_windows(one.windows, three.windows));
}

TEST_CASE("gap certification leaves holes only next to windows") {
  ScanOptions opt;
  opt.certify_gaps = true;
  const auto r = scan(682112.5, 682113.5, opt);
  REQUIRE(r.windows.size() == 1);
  REQUIRE(r.uncertified.size() == 2);
  CHECK(r.uncertified[0].second == doctest::Approx(r.windows[0].t_start));
  CHECK(r.uncertified[1].first == doctest::Approx(r.windows[0].t_end));
  CHECK(r.certified.front().t_lo == 682112.5);
}

TEST_CASE("table formatting rounds to 4 decimals") {
  CHECK(format4(682112.91689) == "682112.9169");
  CHECK(format4(-0.0027652) == "-0.0028");
  CHECK(format4(0.05291225) == "0.0529");
  CHECK(format4(0.00016) == "0.0002");
  CHECK(format4(0.03125) == "0.0313");  // exact binary tie, rounded away from zero
  CHECK(format4(-0.00001) == "0.0000");
  for (const auto& row : reference_table()) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", row.length);
    CHECK(format4(row.length) == buf);
  }
}

TEST_CASE("empirical density") {
  CHECK(empirical_d({}, 100.0) == 0.0);
  NegativeWindow w;
  w.t_start = 2.0;
  w.t_end = 3.0;
  w.length = 1.0;
  CHECK(empirical_d({w}, 10.0) == doctest::Approx(0.1));
  CHECK_THROWS_AS(empirical_d({w}, 2.5), DomainError);

  const auto& ref = reference_table();
  REQUIRE(ref.size() == 50);
  std::vector<NegativeWindow> table;
  for (const auto& row : ref) {
    NegativeWindow x;
    x.t_start = row.t - row.length / 2.0;
    x.t_end = row.t + row.length / 2.0;
    x.length = row.length;
    table.push_back(x);
  }
  const double T = ref.back().t + ref.back().length / 2.0;
  CHECK(empirical_d(table, T) == doctest::Approx(3.89e-7).epsilon(2e-3));
  CHECK(kReferenceLengthSum / T == doctest::Approx(3.8927e-7).epsilon(1e-4));
}
