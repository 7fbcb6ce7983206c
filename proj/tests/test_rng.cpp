#include <doctest.h>

#include <cmath>

#include "alice/rng.hpp"

using alice::CounterRng;
using alice::Stream;

TEST_CASE("equal keys give identical draws") {
  const CounterRng a(42, Stream::process_noise), b(42, Stream::process_noise);
  for (std::uint64_t t = 0; t < 50; ++t) CHECK(a.normal(t, 1) == b.normal(t, 1));
}

TEST_CASE("seeds and streams are distinct") {
  const CounterRng base(7, Stream::process_noise);
  const CounterRng other_seed(8, Stream::process_noise);
  const CounterRng other_stream(7, Stream::warmup_action);
  int same_seed = 0, same_stream = 0;
  for (std::uint64_t t = 0; t < 1000; ++t) {
    same_seed += base.bits(t, 0) == other_seed.bits(t, 0);
    same_stream += base.bits(t, 0) == other_stream.bits(t, 0);
  }
  CHECK(same_seed == 0);
  CHECK(same_stream == 0);
}

TEST_CASE("uniforms stay inside the open unit interval") {
  const CounterRng rng(0, Stream::test);
  for (std::uint64_t i = 0; i < 10000; ++i) {
    const double u = rng.uniform(i, 0);
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("normal draws have unit moments") {
  const CounterRng rng(123, Stream::test);
  constexpr int N = 200000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < N; ++i) {
    const double z = rng.normal(static_cast<std::uint64_t>(i), 0);
    sum += z;
    sum2 += z * z;
  }
  const double mean = sum / N;
  CHECK(std::abs(mean) < 5.0 / std::sqrt(N));
  CHECK(std::abs(sum2 / N - mean * mean - 1.0) < 0.02);
}
