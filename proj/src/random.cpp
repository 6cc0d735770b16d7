#include "invperc/random.hpp"

#include <cmath>
#include <stdexcept>

namespace invperc::rng {

namespace {

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Gamma conditioning from the SplittableRandom design: force odd and
// re-mix gammas with too-uniform bit transitions.
inline std::uint64_t mix_gamma(std::uint64_t z) {
  z = (z ^ (z >> 33)) * 0xff51afd7ed558ccdULL;
  z = (z ^ (z >> 33)) * 0xc4ceb9fe1a85ec53ULL;
  z = (z ^ (z >> 33)) | 1ULL;
  int transitions = __builtin_popcountll(z ^ (z >> 1));
  return (transitions < 24) ? z ^ 0xaaaaaaaaaaaaaaaaULL : z;
}

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::uint64_t Stream::next_u64() {
  state_ += gamma_;
  return mix64(state_);
}

double Stream::next_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Stream::next_unit_open() {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t Stream::next_below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("next_below: n must be positive");
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
}

double Stream::next_exponential(double rate) {
  if (!(rate > 0.0)) throw std::invalid_argument("next_exponential: rate must be positive");
  return -std::log(next_unit_open()) / rate;
}

int Stream::next_signed_bernoulli(double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("next_signed_bernoulli: p outside [0,1]");
  return next_unit() < p ? +1 : -1;
}

long Stream::next_poisson(double lambda) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("next_poisson: lambda must be >= 0");
  // Knuth products on chunks of at most 10; the chunk sum is exact by
  // Poisson superposition and keeps exp(-chunk) away from underflow.
  long total = 0;
  while (lambda > 0.0) {
    double chunk = lambda > 10.0 ? 10.0 : lambda;
    lambda -= chunk;
    double limit = std::exp(-chunk);
    long k = 0;
    double prod = 1.0;
    do {
      ++k;
      prod *= next_unit_open();
    } while (prod > limit);
    total += k - 1;
  }
  return total;
}

Stream SeedSpec::stream() const { return make_stream(master, label, id0, id1, id2); }

Stream make_stream(std::uint64_t master, std::string_view label,
                   std::uint64_t id0, std::uint64_t id1, std::uint64_t id2) {
  std::uint64_t h = mix64(master ^ 0x6a09e667f3bcc909ULL);
  h = mix64(h ^ fnv1a(label));
  h = mix64(h ^ (id0 + 0x9e3779b97f4a7c15ULL));
  h = mix64(h ^ (id1 + 0x3c6ef372fe94f82bULL));
  h = mix64(h ^ (id2 + 0xbb67ae8584caa73bULL));
  std::uint64_t gamma = mix_gamma(h + 0x9e3779b97f4a7c15ULL);
  return Stream(h, gamma);
}

std::uint64_t signed_key(long long v) {
  std::uint64_t u = static_cast<std::uint64_t>(v);
  return (u << 1) ^ static_cast<std::uint64_t>(v >> 63);
}

std::vector<double> poisson_point_process(Stream& s, double rate, double horizon) {
  if (!(rate > 0.0)) throw std::invalid_argument("poisson_point_process: rate must be positive");
  if (horizon < 0.0) throw std::invalid_argument("poisson_point_process: horizon must be >= 0");
  std::vector<double> times;
  double t = 0.0;
  for (;;) {
    t += s.next_exponential(rate);
    if (t > horizon) break;
    times.push_back(t);
  }
  return times;
}

}  // namespace invperc::rng
