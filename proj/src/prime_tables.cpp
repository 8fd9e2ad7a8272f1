#include "zetalab/prime_tables.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "zetalab/numeric.hpp"

namespace zetalab {

PrimeTable sieve_primes(uint64_t limit) {
  if (limit < 2) throw std::invalid_argument("limit too small: need limit >= 2");
  if (limit > (uint64_t(1) << 32)) throw std::invalid_argument("limit too large: cap is 2^32");

  PrimeTable table;
  table.limit = limit;

  uint64_t root = static_cast<uint64_t>(std::sqrt(static_cast<double>(limit)));
  while ((root + 1) * (root + 1) <= limit) ++root;
  while (root * root > limit) --root;

  // small primes up to sqrt(limit)
  std::vector<char> is_prime(root + 1, 1);
  for (uint64_t i = 2; i * i <= root; ++i)
    if (is_prime[i])
      for (uint64_t j = i * i; j <= root; j += i) is_prime[j] = 0;
  std::vector<uint64_t> small;
  for (uint64_t i = 2; i <= root; ++i)
    if (is_prime[i]) small.push_back(i);

  if (limit >= 4)
    table.primes.reserve(static_cast<std::size_t>(
        1.2 * static_cast<double>(limit) / std::log(static_cast<double>(limit))));

  const uint64_t segment = 1 << 18;
  std::vector<char> sieve(segment);
  for (uint64_t low = 2; low <= limit; low += segment) {
    uint64_t high = std::min(low + segment - 1, limit);
    std::fill(sieve.begin(), sieve.begin() + (high - low + 1), 1);
    for (uint64_t p : small) {
      if (p * p > high) break;
      uint64_t start = std::max(p * p, ((low + p - 1) / p) * p);
      for (uint64_t j = start; j <= high; j += p) sieve[j - low] = 0;
    }
    for (uint64_t n = low; n <= high; ++n)
      if (sieve[n - low]) table.primes.push_back(n);
  }

  for (uint64_t p : small) table.prime_squares.push_back(p * p);
  return table;
}

std::vector<uint64_t> trial_division_primes(uint64_t limit) {
  std::vector<uint64_t> out;
  for (uint64_t n = 2; n <= limit; ++n) {
    bool prime = true;
    for (uint64_t d = 2; d * d <= n; ++d)
      if (n % d == 0) {
        prime = false;
        break;
      }
    if (prime) out.push_back(n);
  }
  return out;
}

WeightedSum weighted_prime_sum(const PrimeTable& table, double sigma,
                               std::optional<double> smoothing_log_x, bool squared,
                               bool over_prime_squares, std::optional<double> range_limit) {
  if (sigma < 0.5) throw std::invalid_argument("sigma must be at least 1/2");
  double range = range_limit.value_or(static_cast<double>(table.limit));
  if (range > static_cast<double>(table.limit) + 0.5)
    throw std::invalid_argument("table too short for requested range");
  if (smoothing_log_x && *smoothing_log_x < std::log(std::max(range, 2.0)) - 1e-12)
    throw std::invalid_argument("smoothing shorter than range");

  // In terms of n the decay exponent is the same for both series:
  // p^{-c sigma} = n^{-c sigma} over primes, p^{-2c sigma} = n^{-c sigma}
  // over n = p^2, with c = 2 when squared.
  int weight_exp = squared ? 2 : 1;
  double coef = (squared ? 2.0 : 1.0) * sigma;

  KahanSum acc;
  std::size_t terms = 0;
  const auto& seq = over_prime_squares ? table.prime_squares : table.primes;
  for (uint64_t n : seq) {
    if (static_cast<double>(n) > range) break;
    double log_n = std::log(static_cast<double>(n));
    double w = 1.0;
    if (smoothing_log_x) {
      w = 1.0 - log_n / *smoothing_log_x;
      if (weight_exp == 2) w *= w;
    }
    acc.add(w * std::exp(-coef * log_n));
    ++terms;
  }

  WeightedSum out;
  out.value = acc.value();
  out.terms = terms;
  char buf[96];
  std::snprintf(buf, sizeof buf, "w^%d/p^{%.3g sigma} over %s", weight_exp,
                (over_prime_squares ? 2.0 : 1.0) * (squared ? 2.0 : 1.0),
                over_prime_squares ? "p^2 <= x" : "p <= x");
  out.weight_descriptor = buf;
  return out;
}

WeightedSum mertens_log_sum(const PrimeTable& table, double x) {
  if (x > static_cast<double>(table.limit) + 0.5)
    throw std::invalid_argument("table too short for requested range");
  KahanSum acc;
  std::size_t terms = 0;
  for (uint64_t p : table.primes) {
    if (static_cast<double>(p) > x) break;
    acc.add(std::log(static_cast<double>(p)) / static_cast<double>(p));
    ++terms;
  }
  return {acc.value(), terms, "log p / p"};
}

namespace {

constexpr uint64_t kCacheMagic = 0x5a4c5052494d4553ULL;  // "ZLPRIMES"

void write_u64(std::FILE* f, uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  if (std::fwrite(b, 1, 8, f) != 8) throw std::runtime_error("cache write failed");
}

uint64_t read_u64(std::FILE* f) {
  unsigned char b[8];
  if (std::fread(b, 1, 8, f) != 8) throw std::runtime_error("cache read failed");
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(b[i]) << (8 * i);
  return v;
}

void write_varint(std::FILE* f, uint64_t v) {
  while (v >= 0x80) {
    std::fputc(static_cast<int>((v & 0x7f) | 0x80), f);
    v >>= 7;
  }
  std::fputc(static_cast<int>(v), f);
}

uint64_t read_varint(std::FILE* f) {
  uint64_t v = 0;
  int shift = 0;
  for (;;) {
    int c = std::fgetc(f);
    if (c == EOF) throw std::runtime_error("cache read failed");
    v |= static_cast<uint64_t>(c & 0x7f) << shift;
    if (!(c & 0x80)) return v;
    shift += 7;
  }
}

}  // namespace

void save_prime_cache(const PrimeTable& table, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("cannot open cache for writing: " + path);
  write_u64(f, kCacheMagic);
  write_u64(f, table.limit);
  write_u64(f, table.primes.size());
  uint64_t prev = 0;
  for (uint64_t p : table.primes) {
    write_varint(f, p - prev);
    prev = p;
  }
  if (std::fclose(f) != 0) throw std::runtime_error("cache close failed: " + path);
}

PrimeTable load_prime_cache(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) throw std::runtime_error("cannot open cache: " + path);
  PrimeTable table;
  try {
    if (read_u64(f) != kCacheMagic) throw std::runtime_error("bad cache magic: " + path);
    table.limit = read_u64(f);
    uint64_t count = read_u64(f);
    table.primes.reserve(count);
    uint64_t prev = 0;
    for (uint64_t i = 0; i < count; ++i) {
      prev += read_varint(f);
      table.primes.push_back(prev);
    }
  } catch (...) {
    std::fclose(f);
    throw;
  }
  std::fclose(f);
  for (uint64_t p : table.primes) {
    if (p * p > table.limit) break;
    table.prime_squares.push_back(p * p);
  }
  return table;
}

}  // namespace zetalab
