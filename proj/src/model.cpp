#include "tinregion/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace tin {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kAlignmentTolerance = 1e-12;

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// 0.5 * log2((1 - qy) / (1 - qs)) with q = |pseudovariance / variance|^2.
double impropriety_term(double ratio_y, double ratio_s) {
  return 0.5 * (std::log1p(-ratio_y * ratio_y) - std::log1p(-ratio_s * ratio_s)) /
         std::numbers::ln2;
}

}  // namespace

ChannelRealization ChannelRealization::from_coefficients(Complex h11, Complex h12,
                                                         Complex h21, Complex h22,
                                                         double noise1, double noise2) {
  ChannelRealization ch;
  ch.gain = {{{h11, h12}, {h21, h22}}};
  ch.noise = {noise1, noise2};
  ch.validate();
  return ch;
}

void ChannelRealization::validate() const {
  for (int k = 0; k < 2; ++k) {
    if (!(noise[k] > 0.0) || !std::isfinite(noise[k]))
      throw PreconditionError("noise variance must be positive and finite");
    for (int j = 0; j < 2; ++j)
      if (!finite(gain[k][j]))
        throw PreconditionError("channel coefficient must be finite");
  }
}

TransmitStrategy TransmitStrategy::proper(const PowerVector& p) {
  TransmitStrategy x;
  x.variance = p;
  return x;
}

void TransmitStrategy::validate() const {
  for (int k = 0; k < 2; ++k) {
    if (!(variance[k] >= 0.0) || !std::isfinite(variance[k]))
      throw PreconditionError("transmit variance must be nonnegative");
    if (!(impropriety[k] >= 0.0) || impropriety[k] > variance[k])
      throw PreconditionError("impropriety must satisfy 0 <= kappa <= c");
    if (!std::isfinite(phase[k]))
      throw PreconditionError("pseudovariance phase must be finite");
  }
}

void PowerBudget::validate() const {
  if (!(p1 >= 0.0) || !(p2 >= 0.0) || !std::isfinite(p1) || !std::isfinite(p2))
    throw PreconditionError("power budget must be nonnegative and finite");
}

RateProfile::RateProfile(double beta) : beta_(beta) {
  if (!(beta >= 0.0 && beta <= 1.0))
    throw PreconditionError("rate profile beta must lie in [0, 1]");
}

RatePair rate_pair_improper(const ChannelRealization& ch, const TransmitStrategy& x) {
  x.validate();
  std::array<double, 2> rate{};
  std::array<Complex, 2> pseudo{std::polar(x.impropriety[0], x.phase[0]),
                                std::polar(x.impropriety[1], x.phase[1])};
  for (int k = 0; k < 2; ++k) {
    const int j = 1 - k;
    const double cs = ch.power_gain(k, j) * x.variance[j] + ch.noise[k];
    const double signal = ch.power_gain(k, k) * x.variance[k];
    const double cy = signal + cs;
    const Complex hkk = ch.gain[k][k];
    const Complex hkj = ch.gain[k][j];
    const Complex pseudo_s = hkj * hkj * pseudo[j];
    const Complex pseudo_y = hkk * hkk * pseudo[k] + pseudo_s;
    const double r = std::log1p(signal / cs) / std::numbers::ln2 +
                     impropriety_term(std::abs(pseudo_y) / cy, std::abs(pseudo_s) / cs);
    rate[k] = std::max(0.0, r);
  }
  return {rate[0], rate[1]};
}

RatePair rate_pair_proper(const ChannelRealization& ch, const PowerVector& p) {
  if (!(p[0] >= 0.0) || !(p[1] >= 0.0))
    throw PreconditionError("transmit powers must be nonnegative");
  std::array<double, 2> rate{};
  for (int k = 0; k < 2; ++k) {
    const int j = 1 - k;
    const double cs = ch.power_gain(k, j) * p[j] + ch.noise[k];
    rate[k] = std::log1p(ch.power_gain(k, k) * p[k] / cs) / std::numbers::ln2;
  }
  return {rate[0], rate[1]};
}

RatePair rate_upper_bound(const ChannelRealization& ch, const TransmitStrategy& x) {
  x.validate();
  std::array<double, 2> rate{};
  for (int k = 0; k < 2; ++k) {
    const int j = 1 - k;
    const double gkk = ch.power_gain(k, k);
    const double gkj = ch.power_gain(k, j);
    const double cs = gkj * x.variance[j] + ch.noise[k];
    const double signal = gkk * x.variance[k];
    const double cy = signal + cs;
    const double residual = std::abs(gkk * x.impropriety[k] - gkj * x.impropriety[j]);
    rate[k] = std::log1p(signal / cs) / std::numbers::ln2 +
              impropriety_term(residual / cy, gkj * x.impropriety[j] / cs);
  }
  return {rate[0], rate[1]};
}

ChannelRealization enhance(const ChannelRealization& ch) {
  ChannelRealization out = ch;
  for (auto& row : out.gain)
    for (auto& h : row) h = Complex(std::abs(h), 0.0);
  return out;
}

double wrap_phase(double angle) {
  double w = std::fmod(angle, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;
  return w;
}

AlignmentPhases alignment_phases(const ChannelRealization& ch) {
  for (const auto& row : ch.gain)
    for (const auto& h : row)
      if (std::abs(h) == 0.0)
        throw PreconditionError("phase alignment undefined for a zero channel coefficient");

  // phi_k - phi_j = pi + arg(h_kj^2 / h_kk^2)
  auto offset = [&](int k) {
    const int j = 1 - k;
    return wrap_phase(std::numbers::pi + 2.0 * std::arg(ch.gain[k][j] / ch.gain[k][k]));
  };
  AlignmentPhases out;
  out.psi1 = offset(0);
  out.psi2 = offset(1);
  const double sum = wrap_phase(out.psi1 + out.psi2);
  out.simultaneous = std::min(sum, kTwoPi - sum) <= kAlignmentTolerance;
  return out;
}

}  // namespace tin
