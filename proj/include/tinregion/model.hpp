#pragma once

// Two-user Gaussian interference channel with treat-interference-as-noise
// receivers: channel/strategy types and closed-form rate expressions.

#include <array>
#include <complex>
#include <stdexcept>
#include <string>

namespace tin {

using Complex = std::complex<double>;

/// Transmit powers (p1, p2) of the two users, indexed 0 and 1.
using PowerVector = std::array<double, 2>;

/// Raised when an operation is called with arguments outside its domain.
class PreconditionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// y_k = h_k1 x_1 + h_k2 x_2 + n_k with proper complex Gaussian noise.
///
/// `gain[k][j]` is the coefficient from transmitter j to receiver k
/// (zero-based), `noise[k]` the complex noise variance at receiver k.
struct ChannelRealization {
  std::array<std::array<Complex, 2>, 2> gain{};
  std::array<double, 2> noise{1.0, 1.0};

  static ChannelRealization from_coefficients(Complex h11, Complex h12,
                                              Complex h21, Complex h22,
                                              double noise1, double noise2);

  /// |h_kj|^2
  double power_gain(int k, int j) const { return std::norm(gain[k][j]); }

  /// Throws PreconditionError unless both noise variances are positive and
  /// all coefficients are finite.
  void validate() const;
};

/// Per-user transmit variance c_k, impropriety magnitude kappa_k and
/// pseudovariance phase phi_k; the pseudovariance is kappa_k * exp(j phi_k).
struct TransmitStrategy {
  PowerVector variance{};
  PowerVector impropriety{};
  std::array<double, 2> phase{};

  static TransmitStrategy proper(const PowerVector& p);

  /// Requires 0 <= kappa_k <= c_k and finite phases.
  void validate() const;
};

struct PowerBudget {
  double p1 = 0.0;
  double p2 = 0.0;

  double operator[](int k) const { return k == 0 ? p1 : p2; }
  void validate() const;
};

/// Achievable rates in bits per channel use.
struct RatePair {
  double r1 = 0.0;
  double r2 = 0.0;

  double operator[](int k) const { return k == 0 ? r1 : r2; }
};

/// rho = (beta, 1 - beta).
class RateProfile {
public:
  explicit RateProfile(double beta);

  double beta() const { return beta_; }
  double rho(int k) const { return k == 0 ? beta_ : 1.0 - beta_; }

private:
  double beta_;
};

RatePair rate_pair_improper(const ChannelRealization& ch,
                            const TransmitStrategy& x);

/// Rates with both pseudovariances zero:
/// r_k = log2(1 + |h_kk|^2 p_k / (noise_k + |h_kj|^2 p_j)).
RatePair rate_pair_proper(const ChannelRealization& ch, const PowerVector& p);

/// Phase-independent upper bound on rate_pair_improper obtained by
/// anti-aligning the two pseudovariance contributions at each receiver.
RatePair rate_upper_bound(const ChannelRealization& ch,
                          const TransmitStrategy& x);

/// Same channel with every coefficient replaced by its modulus.
ChannelRealization enhance(const ChannelRealization& ch);

struct AlignmentPhases {
  double psi1 = 0.0;  // phi_1 - phi_2 that makes the bound tight for user 1
  double psi2 = 0.0;  // phi_2 - phi_1 that makes the bound tight for user 2
  bool simultaneous = false;
};

/// Phase differences in [0, 2pi). `simultaneous` holds when
/// psi1 + psi2 = 0 (mod 2pi), i.e. one phase pair serves both receivers.
AlignmentPhases alignment_phases(const ChannelRealization& ch);

/// Wraps an angle to [0, 2pi).
double wrap_phase(double angle);

}  // namespace tin
