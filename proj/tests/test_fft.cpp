#include <catch2/catch_amalgamated.hpp>

#include "gfdm/fft.hpp"
#include "test_util.hpp"

using namespace gfdm;
using testutil::max_abs_diff;
using testutil::naive_dft;
using testutil::naive_idft;
using testutil::random_block;

TEST_CASE("radix-2 sizes match the naive DFT") {
  for (std::size_t n : {1u, 2u, 4u, 8u, 64u, 256u, 1024u}) {
    const Fft plan(n);
    const cvec x = random_block(n, 11, n);
    const cvec got = plan.forward(x);
    const cvec want = naive_dft(x);
    INFO("n=" << n);
    CHECK(max_abs_diff(got, want) < 1e-9 * double(n));
  }
}

TEST_CASE("non-power-of-two sizes go through Bluestein and still match") {
  for (std::size_t n : {3u, 5u, 6u, 7u, 12u, 15u, 21u, 40u, 320u}) {
    const Fft plan(n);
    const cvec x = random_block(n, 12, n);
    const cvec got = plan.forward(x);
    const cvec want = naive_dft(x);
    INFO("n=" << n);
    CHECK(max_abs_diff(got, want) < 1e-10 * double(n));
  }
}

TEST_CASE("inverse undoes forward") {
  for (std::size_t n : {1u, 2u, 8u, 12u, 21u, 64u, 320u}) {
    const Fft plan(n);
    const cvec x = random_block(n, 13, n);
    const cvec back = plan.inverse(plan.forward(x));
    INFO("n=" << n);
    CHECK(max_abs_diff(back, x) < 1e-12 * double(n));
  }
}

TEST_CASE("inverse matches the naive inverse DFT") {
  for (std::size_t n : {4u, 7u, 16u}) {
    const Fft plan(n);
    const cvec x = random_block(n, 14, n);
    CHECK(max_abs_diff(plan.inverse(x), naive_idft(x)) < 1e-12 * double(n));
  }
}

TEST_CASE("direct table DFT agrees with the naive DFT") {
  for (std::size_t n : {1u, 2u, 3u, 5u, 8u, 13u, 21u}) {
    const DirectDft dft(n);
    const cvec x = random_block(n, 15, n);
    CHECK(max_abs_diff(dft.forward(x), naive_dft(x)) < 1e-12 * double(n));
    CHECK(max_abs_diff(dft.inverse(dft.forward(x)), x) < 1e-12 * double(n));
  }
}

TEST_CASE("size zero is rejected") {
  CHECK_THROWS_AS(Fft(0), std::invalid_argument);
  CHECK_THROWS_AS(DirectDft(0), std::invalid_argument);
}
