#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace invperc::rng {

// Splittable counter-style stream: a (state, gamma) pair in the SplitMix
// design. Streams are value types; each is addressed purely by
// (master seed, structured key), never by draw order, so any object's
// stream can be regenerated or substituted in isolation.
class Stream {
 public:
  Stream() = default;
  Stream(std::uint64_t state, std::uint64_t gamma) : state_(state), gamma_(gamma | 1) {}

  std::uint64_t next_u64();
  double next_unit();       // uniform in [0,1)
  double next_unit_open();  // uniform in (0,1)
  std::uint64_t next_below(std::uint64_t n);  // uniform in [0,n)
  double next_exponential(double rate);       // strictly positive
  int next_signed_bernoulli(double p);        // +1 with probability p, else -1
  long next_poisson(double lambda);

 private:
  std::uint64_t state_ = 0;
  std::uint64_t gamma_ = 0x9e3779b97f4a7c15ULL;
};

// Structured stream address: master seed plus a label and numeric ids.
struct SeedSpec {
  std::uint64_t master = 0;
  std::string label;
  std::uint64_t id0 = 0;
  std::uint64_t id1 = 0;
  std::uint64_t id2 = 0;

  Stream stream() const;
};

Stream make_stream(std::uint64_t master, std::string_view label,
                   std::uint64_t id0 = 0, std::uint64_t id1 = 0,
                   std::uint64_t id2 = 0);

// Maps a signed index to a key id (zig-zag), for streams keyed by
// coordinates that may be negative.
std::uint64_t signed_key(long long v);

// Unit-rate-scaled Poisson clock: strictly increasing ring times in
// (0, horizon]. Count is Poisson(rate * horizon).
std::vector<double> poisson_point_process(Stream& s, double rate, double horizon);

}  // namespace invperc::rng
