#pragma once

namespace ledgerage::channel {

// All fields in SI units.
struct ChannelParams {
  double P = 1.0;             // transmit power, W
  double N0 = 1e-13;          // noise power spectral density, W/Hz
  double W = 1e6;             // bandwidth, Hz
  double lambda_bs = 1e-10;   // interferer density, 1/m^2
  double l = 37.0;            // source to base-station distance, m
  double n = 4.0;             // pathloss exponent

  void validate() const;
};

// SINR threshold for a target rate: 2^{eps/W} - 1.
double sinr_threshold(double epsilon, const ChannelParams& params);

// Successful transmission probability at target rate epsilon (bit/s).
double stp(double epsilon, const ChannelParams& params);

// Largest rate whose STP equals zeta. zeta = 1 returns 0.
double max_rate(const ChannelParams& params, double zeta);

// Closed-form root for pathloss exponent 4.
double max_rate_n4(const ChannelParams& params, double zeta);

double tx_latency(double D_bits, double rate);

}  // namespace ledgerage::channel
