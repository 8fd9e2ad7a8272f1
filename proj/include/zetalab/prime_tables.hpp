#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace zetalab {

// Primes and squares of primes up to a bound. Only p and p^2 support is
// needed anywhere: higher prime powers are absorbed into error budgets.
struct PrimeTable {
  uint64_t limit = 0;
  std::vector<uint64_t> primes;         // ascending, all p <= limit
  std::vector<uint64_t> prime_squares;  // p^2 for p <= sqrt(limit), ascending

  std::size_t count() const { return primes.size(); }
};

struct WeightedSum {
  double value = 0.0;
  std::size_t terms = 0;
  std::string weight_descriptor;
};

// Segmented sieve; memory stays O(sqrt(limit) + segment).
PrimeTable sieve_primes(uint64_t limit);

// Trial-division reference, usable as an independent oracle for small limits.
std::vector<uint64_t> trial_division_primes(uint64_t limit);

// Sum over primes p <= min(range_limit, table.limit) of w(n)/p^{c*sigma}
// where n = p (or n = p^2 with the sum over p^2 <= range instead), c = 1
// (or 2 when squared, doubled again for the p^2 series), and
// w(n) = (1 - log n / smoothing_log_x)^e with e = 1, or 2 when squared.
// Without smoothing w == 1.
WeightedSum weighted_prime_sum(const PrimeTable& table, double sigma,
                               std::optional<double> smoothing_log_x, bool squared,
                               bool over_prime_squares = false,
                               std::optional<double> range_limit = std::nullopt);

// Sum of (log p)/p over p <= x.
WeightedSum mertens_log_sum(const PrimeTable& table, double x);

// Binary cache: header {magic, limit, count}, then varint-encoded gaps.
void save_prime_cache(const PrimeTable& table, const std::string& path);
PrimeTable load_prime_cache(const std::string& path);

}  // namespace zetalab
