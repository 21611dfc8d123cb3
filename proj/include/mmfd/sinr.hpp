#pragma once

#include "mmfd/antenna.hpp"
#include "mmfd/channel.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace mmfd {

using LinkId = std::int64_t;
constexpr LinkId kNoLink = -1;

/// Radio-level view of a node for SINR evaluation.
struct RadioNode {
    Position pos;
    AntennaConfig antenna;
};

/// How a receiver listens: pointed at a peer position, or quasi-omni with
/// unit gain (idle listening and RTS reception).
struct Listening {
    bool quasi_omni = true;
    Position toward{};

    static Listening omni() { return Listening{}; }
    static Listening at(Position p) { return Listening{false, p}; }
};

/// One in-flight directional transmission.
struct ActiveTransmission {
    RadioNode tx;
    Position aimed_at;   ///< destination position the transmit beam points to
    double power_w = 0;
    LinkId link = kNoLink;
};

/// Receiver state during the evaluation: where it listens, whether it is
/// itself transmitting (residual self-interference applies), and its SI
/// cancellation level.
struct ReceiverState {
    RadioNode node;
    Listening listening;
    bool transmitting = false;
    double tx_power_w = 0;
    double si_beta = 0;
};

/// All terms of a receiver's SINR, in watts, plus the resulting ratio.
struct SinrBreakdown {
    double signal_w = 0;
    double residual_si_w = 0;
    double ibi_w = 0;        ///< interference from the same FD link's other transmitter
    double co_channel_w = 0; ///< interference from concurrent links
    double noise_w = 0;
    double sinr = 0;

    double interference_total() const { return residual_si_w + ibi_w + co_channel_w + noise_w; }
};

struct SinrOptions {
    bool include_ibi = true; ///< when false the same-link interference term is forced to zero
};

/// Receive gain of `rx` toward a point source, honoring quasi-omni listening.
double listener_gain(const RadioNode& rx, const Listening& listening, Position source);

/// Received power of one transmission at a receiver with the given listening
/// state. Zero when the transmit beam does not cover the receiver or the
/// receive beam does not cover the transmitter.
double transmission_power_at(const ActiveTransmission& t, const RadioNode& rx,
                             const Listening& listening, const ChannelParams& params);

/// Full SINR of `wanted` at the receiver, with every concurrent transmission
/// contributing through the receiver's current listening state. Interference
/// from a transmitter on the same link id is classified as IBI; everything
/// else is co-channel. Residual SI applies iff the receiver is transmitting.
SinrBreakdown sinr(const ReceiverState& receiver, const ActiveTransmission& wanted,
                   const std::vector<ActiveTransmission>& concurrent,
                   const ChannelParams& params, const SinrOptions& opts = {});

} // namespace mmfd
