#include "netmimo/fading.hpp"

#include <cmath>

#include "netmimo/throughput.hpp"
#include "netmimo/units.hpp"

namespace netmimo {
namespace {

constexpr double kInvSqrt2 = 0.7071067811865476;

std::complex<double> unit_gaussian(Rng& rng) {
  return {rng.normal() * kInvSqrt2, rng.normal() * kInvSqrt2};
}

double frob2(const std::vector<std::complex<double>>& m) {
  double sum = 0;
  for (const auto& z : m) sum += std::norm(z);
  return sum;
}

}  // namespace

ChannelDraw draw_channel(Rng& rng, int n_r, int n_t_p, int n_t_c) {
  if (n_r < 1 || n_t_p < 1 || n_t_c < 1) throw DomainError("channel draw: bad dimensions");
  ChannelDraw draw;
  draw.n_r = n_r;
  draw.n_t_p = n_t_p;
  draw.n_t_c = n_t_c;
  draw.h1.resize(size_t(n_r) * size_t(n_t_p));
  draw.h2.resize(size_t(n_r) * size_t(n_t_c));
  for (auto& z : draw.h1) z = unit_gaussian(rng);
  for (auto& z : draw.h2) z = unit_gaussian(rng);
  return draw;
}

double instantaneous_sinr_private(const ChannelDraw& draw, int bs, int ms_id, double theta_k_c,
                                  const Scenario& scenario) {
  double s = snr_term(bs, ms_id, scenario);
  double num = s * theta_k_c * (scenario.rates.r_c / draw.n_t_c) * frob2(draw.h2);
  double den =
      s * (1 - theta_k_c) * (scenario.rates.r_p[size_t(bs)] / draw.n_t_p) * frob2(draw.h1) +
      draw.n_r;
  return num / den;
}

double instantaneous_sinr_common(const std::vector<ChannelDraw>& draws, int ms_id,
                                 const PowerSplit& theta, const Scenario& scenario,
                                 const UserSets& sets, CommonSumMode mode) {
  const int n_bs = scenario.n_bs();
  if (int(draws.size()) != n_bs) throw DomainError("common sinr: one channel draw per BS needed");
  const ChannelDraw& first = draws[0];

  double num = 0;
  if (mode == CommonSumMode::coherent) {
    // All BSs carry the same shared symbols, so their channel matrices add
    // entrywise with per-BS amplitude scaling before the norm is taken.
    std::vector<std::complex<double>> summed(first.h2.size());
    for (int k = 0; k < n_bs; ++k) {
      double s = snr_term(k, ms_id, scenario);
      double amp = std::sqrt(s * theta.theta_c[size_t(k)] * scenario.rates.r_c / first.n_t_c);
      for (size_t i = 0; i < summed.size(); ++i) summed[i] += amp * draws[size_t(k)].h2[i];
    }
    num = frob2(summed);
  } else {
    for (int k = 0; k < n_bs; ++k) {
      double s = snr_term(k, ms_id, scenario);
      num += s * theta.theta_c[size_t(k)] * (scenario.rates.r_c / first.n_t_c) *
             frob2(draws[size_t(k)].h2);
    }
  }

  double den = double(first.n_r);
  for (int k = 0; k < n_bs; ++k) {
    if (!sets.private_ms[size_t(k)]) continue;  // no private stream from this BS
    double s = snr_term(k, ms_id, scenario);
    den += s * (1 - theta.theta_c[size_t(k)]) *
           (scenario.rates.r_p[size_t(k)] / first.n_t_p) * frob2(draws[size_t(k)].h1);
  }
  return num / den;
}

void ApproxCheckConfig::validate() const {
  // These all trace back to command-line flags, so they surface as usage
  // errors rather than domain failures.
  if (n_t_p < 1 || n_t_c < 1 || n_r < 1) throw UsageError("approx check: bad antenna counts");
  if (snr_grid_db.empty()) throw UsageError("approx check: empty SNR grid");
  if (!(theta >= 0) || theta > 1) throw UsageError("approx check: theta must be in [0, 1]");
  if (!(r_p > 0) || r_p > 1 || !(r_c > 0) || r_c > 1)
    throw UsageError("approx check: rates must be in (0, 1]");
  if (n_draws < 1000) throw UsageError("approx check: need at least 1000 draws");
}

std::vector<ApproxCheckResult> approx_check(const ApproxCheckConfig& config) {
  config.validate();
  std::vector<ApproxCheckResult> results;
  results.reserve(config.snr_grid_db.size());

  for (size_t i = 0; i < config.snr_grid_db.size(); ++i) {
    const double snr_db = config.snr_grid_db[i];
    const double s = db_to_linear({snr_db}).value;
    Rng rng(derive_seed(config.seed, std::uint64_t(i)));

    double sum_x = 0, sum_x2 = 0;
    double sum_num = 0, sum_num2 = 0;
    double sum_den = 0, sum_den2 = 0;
    for (int d = 0; d < config.n_draws; ++d) {
      ChannelDraw draw = draw_channel(rng, config.n_r, config.n_t_p, config.n_t_c);
      double num = s * config.theta * (config.r_c / config.n_t_c) * frob2(draw.h2);
      double den =
          s * (1 - config.theta) * (config.r_p / config.n_t_p) * frob2(draw.h1) + config.n_r;
      double x = std::log2(1 + num / den);
      sum_x += x;
      sum_x2 += x * x;
      sum_num += num;
      sum_num2 += num * num;
      sum_den += den;
      sum_den2 += den * den;
    }

    const double n = double(config.n_draws);
    auto se = [n](double sum, double sum_sq) {
      double var = (sum_sq - sum * sum / n) / (n - 1);
      return std::sqrt(std::max(var, 0.0) / n);
    };

    ApproxCheckResult r;
    r.snr_db = snr_db;
    r.n_draws = config.n_draws;
    r.mc_mean = sum_x / n;
    r.ci95_halfwidth = 1.96 * se(sum_x, sum_x2);
    r.num_mean = sum_num / n;
    r.num_se = se(sum_num, sum_num2);
    r.num_expected = s * config.theta * config.r_c * config.n_r;
    r.den_mean = sum_den / n;
    r.den_se = se(sum_den, sum_den2);
    r.den_expected = config.n_r * (1 + s * (1 - config.theta) * config.r_p);
    r.closed_form = std::log2(1 + r.num_expected / r.den_expected);
    r.rel_error = std::abs(r.mc_mean - r.closed_form) / std::max(r.mc_mean, 1e-12);
    results.push_back(r);
  }
  return results;
}

}  // namespace netmimo
