#pragma once

#include "mmfd/geometry.hpp"

#include <stdexcept>

namespace mmfd {

/// Propagation and noise parameters of the mmWave channel.
struct ChannelParams {
    double ref_gain = 1.58489319246111348e-7; ///< linear path gain at 1 m (-68 dB default)
    double pathloss_exp = 2.0;                ///< distance exponent
    double oxygen_per_m = 0.0037;             ///< oxygen absorption attenuation, 1/m
    double noise_w = 1e-12;                   ///< background noise power, watts (-90 dBm)
};

/// Friis-style path gain with exponential oxygen absorption:
/// ref_gain * d^-alpha * exp(-c0 * d). Requires d > 0.
inline double path_gain(const ChannelParams& p, Position a, Position b) {
    const double d = distance(a, b);
    if (d <= 0) throw std::invalid_argument("path_gain: zero distance");
    return p.ref_gain * std::pow(d, -p.pathloss_exp) * std::exp(-p.oxygen_per_m * d);
}

/// Received power from a transmitter with the given antenna gains.
inline double received_power(double p_tx_w, double tx_gain, double rx_gain,
                             double path) {
    if (p_tx_w < 0) throw std::invalid_argument("received_power: negative transmit power");
    return p_tx_w * tx_gain * rx_gain * path;
}

/// Residual self-interference after cancellation: p_tx * beta.
inline double residual_si(double p_tx_w, double beta) {
    if (p_tx_w < 0) throw std::invalid_argument("residual_si: negative transmit power");
    if (beta < 0 || beta > 1) throw std::invalid_argument("residual_si: beta outside [0, 1]");
    return p_tx_w * beta;
}

} // namespace mmfd
