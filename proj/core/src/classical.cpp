#include "bakerlab/classical.hpp"

#include <cmath>
#include <string>

#include "bakerlab/errors.hpp"

namespace bakerlab {

namespace {

double frac(double x) {
  double r = x - std::floor(x);
  return r >= 1.0 ? 0.0 : r;
}

// Distance from x to the nearest integer, in [0, 1/2].
double distance_to_integer(double x) {
  const double r = frac(x);
  return std::min(r, 1.0 - r);
}

bool on_forward_discontinuity(PhasePoint x) { return x.p == 0.0 || x.q == 0.0 || x.q == 0.5; }
bool on_inverse_discontinuity(PhasePoint x) { return x.q == 0.0 || x.p == 0.0 || x.p == 0.5; }

}  // namespace

PhasePoint wrap(PhasePoint x) { return {frac(x.q), frac(x.p)}; }

PhasePoint baker_step(PhasePoint x, Direction direction, bool strict) {
  x = wrap(x);
  if (direction == Direction::forward) {
    if (strict && on_forward_discontinuity(x))
      throw DiscontinuityError("point lies on the discontinuity set S_1", 0);
    if (x.q < 0.5) return {2.0 * x.q, 0.5 * x.p};
    return {2.0 * x.q - 1.0, 0.5 * (x.p + 1.0)};
  }
  if (strict && on_inverse_discontinuity(x))
    throw DiscontinuityError("point lies on the discontinuity set S_-1", 0);
  if (x.p < 0.5) return {0.5 * x.q, 2.0 * x.p};
  return {0.5 * (x.q + 1.0), 2.0 * x.p - 1.0};
}

PhasePoint baker_iterate(PhasePoint x, long n, bool strict) {
  x = wrap(x);
  const Direction dir = n >= 0 ? Direction::forward : Direction::inverse;
  const long steps = n >= 0 ? n : -n;
  for (long s = 0; s < steps; ++s) {
    try {
      x = baker_step(x, dir, strict);
    } catch (const DiscontinuityError& e) {
      throw DiscontinuityError(std::string(e.what()) + " at step " + std::to_string(s), s);
    }
  }
  return x;
}

SymbolSequence SymbolSequence::shifted() const {
  SymbolSequence out;
  if (future.empty()) {
    out.past = past;
    return out;
  }
  out.past.reserve(past.size() + 1);
  out.past.push_back(future.front());
  out.past.insert(out.past.end(), past.begin(), past.end());
  out.future.assign(future.begin() + 1, future.end());
  return out;
}

SymbolSequence symbol_encode(PhasePoint x, int depth_past, int depth_future) {
  require(depth_past >= 0 && depth_future >= 0, "symbol_encode: depths must be non-negative");
  x = wrap(x);
  // Doubling a binary float is exact, so the digits come out exactly and
  // the terminating expansion (never ...111...) is the one produced.
  auto digits = [](double v, int depth) {
    std::vector<std::uint8_t> bits;
    bits.reserve(depth);
    for (int i = 0; i < depth; ++i) {
      v *= 2.0;
      const std::uint8_t bit = v >= 1.0 ? 1 : 0;
      v -= bit;
      bits.push_back(bit);
    }
    return bits;
  };
  return {digits(x.p, depth_past), digits(x.q, depth_future)};
}

void validate(const RegionSpec& region) {
  require(region.gamma > 0.0 && region.gamma < 0.5, "region: gamma must lie in (0, 1/2)");
  const double limit = region.n == 0 ? 0.5 : std::ldexp(1.0, -std::abs(region.n) - 1);
  require(region.delta > 0.0 && region.delta < limit,
          "region: delta must lie in (0, " + std::to_string(limit) + ") for n = " +
              std::to_string(region.n));
}

bool in_domain(PhasePoint x, const RegionSpec& region) {
  validate(region);
  x = wrap(x);
  const int m = std::abs(region.n);
  const double fast = region.n >= 0 ? x.q : x.p;
  const double slow = region.n >= 0 ? x.p : x.q;
  // |fast - k/2^m| = dist(2^m fast, Z) / 2^m; scaling by 2^m is exact.
  const double dist = std::ldexp(distance_to_integer(std::ldexp(fast, m)), -m);
  return dist > region.delta && slow > region.gamma && slow < 1.0 - region.gamma;
}

double smooth_step(double t, Bump bump) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  if (bump == Bump::exp) {
    const double a = std::exp(-1.0 / t);
    const double b = std::exp(-1.0 / (1.0 - t));
    return a / (a + b);
  }
  const double t2 = t * t;
  const double t6 = t2 * t2 * t2;
  return t6 * (462.0 + t * (-1980.0 + t * (3465.0 + t * (-3080.0 + t * (1386.0 - 252.0 * t)))));
}

double cutoff_profile(double x, double delta, Bump bump) {
  const double d = distance_to_integer(x);
  return smooth_step((d - delta) / delta, bump);
}

double cutoff_value(PhasePoint x, double delta, int n, Bump bump) {
  require(delta > 0.0 && delta < 0.25, "cutoff: delta must lie in (0, 1/4)");
  x = wrap(x);
  const int m = std::abs(n);
  if (n >= 0) return cutoff_profile(std::ldexp(x.q, m), delta, bump) * cutoff_profile(x.p, delta, bump);
  return cutoff_profile(std::ldexp(x.p, m), delta, bump) * cutoff_profile(x.q, delta, bump);
}

}  // namespace bakerlab
