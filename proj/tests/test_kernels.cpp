#include <cmath>
#include <vector>

#include "doctest.h"
#include "netmimo/kernels.hpp"
#include "netmimo/throughput.hpp"
#include "support/naive.hpp"

using namespace netmimo;

namespace {

std::vector<double> random_args(Rng& rng, int n) {
  // Arguments the objective ever feeds log2: values >= 1 across many scales.
  std::vector<double> x;
  for (int i = 0; i < n; ++i) {
    x.push_back(1.0 + std::pow(10.0, 8.0 * rng.uniform() - 2.0));
  }
  return x;
}

std::vector<double> random_batch(Rng& rng, int n_points, int n_bs) {
  std::vector<double> t;
  for (int i = 0; i < n_points * n_bs; ++i) t.push_back(rng.uniform());
  return t;
}

struct BackendGuard {
  ~BackendGuard() { kernels::force_backend(""); }
};

}  // namespace

TEST_SUITE("kernels") {
  TEST_CASE("scalar log2 batch is exactly the library function") {
    Rng rng(1);
    std::vector<double> x = random_args(rng, 1000);
    std::vector<double> out(x.size());
    kernels::scalar_ops().log2_batch(x.data(), out.data(), int(x.size()));
    for (size_t i = 0; i < x.size(); ++i) {
      CHECK(out[i] == std::log2(x[i]));
    }
  }

  TEST_CASE("objective batch agrees with the per-point evaluation") {
    Rng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
      int n_bs = 1 + rng.uniform_int(4);
      naive::Built b = naive::random_structured(rng, n_bs, 1 + rng.uniform_int(3));
      kernels::ObjectiveTerms terms = kernels::make_objective_terms(b.scenario, b.sets);
      const int n_points = 67;  // not a multiple of the kernel block
      std::vector<double> thetas = random_batch(rng, n_points, n_bs);
      std::vector<double> out(n_points);
      kernels::scalar_ops().objective_batch(terms, thetas.data(), n_points, out.data());
      for (int p = 0; p < n_points; ++p) {
        PowerSplit theta{std::vector<double>(thetas.begin() + p * n_bs,
                                             thetas.begin() + (p + 1) * n_bs)};
        ThroughputReport rep = min_weighted_throughput(theta, b.scenario, b.sets);
        CHECK(out[size_t(p)] == doctest::Approx(rep.min_weighted).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("objective terms flatten the scenario faithfully") {
    naive::Built b = naive::pinned_three_cell();
    kernels::ObjectiveTerms terms = kernels::make_objective_terms(b.scenario, b.sets);
    CHECK(terms.n_bs == 3);
    CHECK(terms.n_common == 2);
    CHECK(terms.n_private == 3);
    CHECK(terms.cmw == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(terms.s_common[0] == doctest::Approx(naive::pinned::s_terms[3][0]).epsilon(1e-11));
    CHECK(terms.r_p_bs == std::vector<double>{1.0, 1.0, 1.0});

    naive::Built half = naive::inactive_bs_case();
    kernels::ObjectiveTerms ht = kernels::make_objective_terms(half.scenario, half.sets);
    CHECK(ht.r_p_bs[0] == 1.0);
    CHECK(ht.r_p_bs[1] == 0.0);  // idle BS contributes no interference term
  }

  TEST_CASE("backend selection validates names and can be forced") {
    BackendGuard guard;
    kernels::force_backend("scalar");
    CHECK(kernels::active_backend_name() == "scalar");
    CHECK(kernels::active_ops().name == std::string("scalar"));
    kernels::force_backend("auto");
    CHECK((kernels::active_backend_name() == "scalar" ||
           kernels::active_backend_name() == "avx2"));
    CHECK_THROWS_AS(kernels::force_backend("neon"), UsageError);
  }

#ifdef NETMIMO_HAVE_AVX2
  TEST_CASE("vector log2 matches the scalar one to a few ulps") {
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
      Rng rng(9);
      // Cover several magnitudes, the subnormal-adjacent edge excluded per
      // the contract (positive normal doubles only).
      std::vector<double> x;
      for (int i = 0; i < 4000; ++i) {
        double mag = 600.0 * rng.uniform() - 300.0;
        x.push_back(std::pow(10.0, mag));
      }
      x.push_back(1.0);
      x.push_back(2.0);
      x.push_back(0.5);
      x.push_back(1.0 - 1e-16);
      x.push_back(1.0 + 2e-16);
      std::vector<double> out(x.size());
      kernels::avx2_ops().log2_batch(x.data(), out.data(), int(x.size()));
      for (size_t i = 0; i < x.size(); ++i) {
        double ref = std::log2(x[i]);
        double err = std::abs(out[i] - ref);
        double scale = std::max(1.0, std::abs(ref));
        CHECK(err <= 5e-15 * scale);
      }
      // Tail handling: every length mod 4.
      for (int n = 0; n <= 5; ++n) {
        std::vector<double> y(x.begin(), x.begin() + n), small(size_t(n), 0.0);
        kernels::avx2_ops().log2_batch(y.data(), small.data(), n);
        for (int i = 0; i < n; ++i) {
          CHECK(small[size_t(i)] == doctest::Approx(std::log2(y[size_t(i)])).epsilon(1e-14));
        }
      }
    }
  }

  TEST_CASE("vector objective matches the scalar backend") {
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
      Rng rng(13);
      for (int trial = 0; trial < 10; ++trial) {
        int n_bs = 1 + rng.uniform_int(4);
        naive::Built b = naive::random_structured(rng, n_bs, 1 + rng.uniform_int(3));
        kernels::ObjectiveTerms terms = kernels::make_objective_terms(b.scenario, b.sets);
        const int n_points = 501;
        std::vector<double> thetas = random_batch(rng, n_points, n_bs);
        std::vector<double> a(n_points), v(n_points);
        kernels::scalar_ops().objective_batch(terms, thetas.data(), n_points, a.data());
        kernels::avx2_ops().objective_batch(terms, thetas.data(), n_points, v.data());
        for (int p = 0; p < n_points; ++p) {
          CHECK(v[size_t(p)] == doctest::Approx(a[size_t(p)]).epsilon(1e-12));
        }
      }
    }
  }
#endif
}
