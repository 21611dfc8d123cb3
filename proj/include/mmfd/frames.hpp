#pragma once

#include "mmfd/mcs.hpp"
#include "mmfd/sim_time.hpp"

#include <cstdint>
#include <stdexcept>

namespace mmfd {

enum class FrameKind : std::uint8_t { Rts, Cts, Data, Ack };

const char* frame_kind_name(FrameKind k);

/// Work-mode values carried by RTS (1 bit) and CTS (2 bits).
enum class RtsWorkMode : std::uint8_t {
    Primary = 0,   ///< sent by a primary transmitter; mode chosen by the receiver
    Secondary = 1, ///< sent by a secondary transmitter; receiver works in HD rx
};

enum class CtsWorkMode : std::uint8_t {
    HdReceive = 0,   ///< 00: sender of the CTS will receive in half duplex
    TwoNodeFd = 1,   ///< 01: sender will transmit and receive simultaneously
    ThreeNodeFd = 2, ///< 10: sender will relay to a third node while receiving
};

/// PHY/MAC framing constants. Control frames ride the control PHY; the DATA
/// frame carries control + SC PHY headers at the control rate and the MAC
/// header plus payload at the selected MCS rate.
struct FrameFormat {
    int control_phy_header_bits = 40;
    int sc_phy_header_bits = 64;
    int mac_header_bits = 320;
    int rts_bits = 352;
    int cts_bits = 304;
    int ack_bits = 304;
    std::int64_t control_rate_bps = 27'500'000;
};

/// MAC frame as it matters to the simulation. Byte layout inside the fixed
/// frame sizes is not modeled; sizes and airtimes are.
struct Frame {
    FrameKind kind = FrameKind::Rts;
    int src = -1;
    int dst = -1;
    bool duplex_fd = false;     ///< duplex mode bit: false HD, true FD
    std::uint8_t work_mode = 0; ///< RtsWorkMode or CtsWorkMode value
    int mcs_index = 0;          ///< MCS mode field (DATA rate announcement)
    std::int64_t payload_bits = 0;
    std::int64_t duration_us = 0; ///< NAV: remaining transaction time

    // Scheduling facts shared through the handshake (zero propagation delay
    // makes them exact): announced DATA airtime and the agreed DATA phase.
    std::int64_t meta_data_air_ns = 0;
    std::int64_t meta_data_start_ns = 0;
    std::int64_t meta_max_data_air_ns = 0;
    double meta_power_w = 0; ///< negotiated transmit power for the peer's DATA (0 = keep)
};

/// Encoded on-air size and duration of a frame.
struct FrameTiming {
    std::int64_t total_bits = 0;
    std::int64_t airtime_ns = 0;
};

struct EncodingError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Ceiling division for exact airtime rounding.
constexpr std::int64_t ceil_div(std::int64_t num, std::int64_t den) {
    return (num + den - 1) / den;
}

/// Airtime of `bits` at `rate_bps`, rounded up to the next nanosecond.
constexpr std::int64_t airtime_ns(std::int64_t bits, std::int64_t rate_bps) {
    return ceil_div(bits * 1'000'000'000, rate_bps);
}

/// Validates the frame fields and returns its on-air size and airtime. The
/// DATA airtime sums the PHY header part at the control rate and the MAC
/// header plus payload at the MCS rate, rounded up once.
FrameTiming encode_frame(const Frame& frame, const FrameFormat& fmt, const McsTable& mcs);

/// Fixed per-transaction overhead of a two-node FD exchange: DIFS, the
/// control frames, three SIFS gaps and the DATA PHY header portion. Exact
/// seconds, no nanosecond rounding.
double two_node_fd_overhead_s(const FrameFormat& fmt, std::int64_t sifs_ns, std::int64_t difs_ns);

} // namespace mmfd
