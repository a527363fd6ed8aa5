#include <map>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "rezeta/error.hpp"
#include "rezeta/kernel.hpp"

namespace rezeta::kernel {

namespace {

// Tangent numbers T_1..T_m by the in-place integer recurrence
//   T_j <- (j-k) T_{j-1} + (j-k+2) T_j,
// then B_2k = (-1)^{k-1} 2k T_k / (4^k (4^k - 1)).
std::vector<mpq_class> even_bernoulli_table(int m) {
  std::vector<mpz_class> tangent(static_cast<std::size_t>(m) + 1);
  tangent[1] = 1;
  for (int k = 2; k <= m; ++k) {
    tangent[k] = (k - 1) * tangent[k - 1];
  }
  for (int k = 2; k <= m; ++k) {
    for (int j = k; j <= m; ++j) {
      tangent[j] = (j - k) * tangent[j - 1] + (j - k + 2) * tangent[j];
    }
  }
  std::vector<mpq_class> out(static_cast<std::size_t>(m) + 1);
  out[0] = 1;
  for (int k = 1; k <= m; ++k) {
    mpz_class four_k = 1;
    four_k <<= 2 * k;
    mpq_class b(mpz_class(2 * k) * tangent[k], four_k * (four_k - 1));
    b.canonicalize();
    out[k] = (k % 2 == 1) ? b : mpq_class(-b);
  }
  return out;
}

struct BernoulliCache {
  std::mutex mutex;
  std::vector<mpq_class> even;  // even[k] = B_2k
  std::map<std::pair<int, long>, Real> rounded;
};

BernoulliCache& cache() {
  static BernoulliCache c;
  return c;
}

}  // namespace

mpq_class bernoulli_exact(int n) {
  if (n < 0) {
    throw DomainError("bernoulli: negative index " + std::to_string(n));
  }
  if (n == 1) {
    return mpq_class(-1, 2);
  }
  if (n % 2 == 1) {
    throw DomainError("bernoulli: odd index " + std::to_string(n));
  }
  if (n > kMaxBernoulliIndex) {
    throw CapacityError("bernoulli: index " + std::to_string(n) + " exceeds maximum " +
                        std::to_string(kMaxBernoulliIndex));
  }
  auto& c = cache();
  std::lock_guard lock(c.mutex);
  const int k = n / 2;
  if (static_cast<int>(c.even.size()) <= k) {
    int m = 64;
    while (m < k) {
      m *= 2;
    }
    c.even = even_bernoulli_table(std::min(m, kMaxBernoulliIndex / 2));
  }
  return c.even[static_cast<std::size_t>(k)];
}

Real bernoulli(int n, const PrecisionContext& ctx) {
  const mpq_class exact = bernoulli_exact(n);
  const long bits = ctx.working_bits();
  auto& c = cache();
  {
    std::lock_guard lock(c.mutex);
    if (auto it = c.rounded.find({n, bits}); it != c.rounded.end()) {
      return it->second;
    }
  }
  PrecisionScope scope(bits);
  Real value(exact);
  std::lock_guard lock(c.mutex);
  c.rounded.emplace(std::make_pair(n, bits), value);
  return value;
}

}  // namespace rezeta::kernel
