#include "mmfd/frames.hpp"

namespace mmfd {

const char* frame_kind_name(FrameKind k) {
    switch (k) {
        case FrameKind::Rts: return "RTS";
        case FrameKind::Cts: return "CTS";
        case FrameKind::Data: return "DATA";
        case FrameKind::Ack: return "ACK";
    }
    return "?";
}

FrameTiming encode_frame(const Frame& frame, const FrameFormat& fmt, const McsTable& mcs) {
    FrameTiming t;
    switch (frame.kind) {
        case FrameKind::Rts:
            if (frame.work_mode > 1) throw EncodingError("RTS work mode must be 0 or 1");
            t.total_bits = fmt.rts_bits;
            break;
        case FrameKind::Cts:
            if (frame.work_mode > 2) throw EncodingError("CTS work mode must be 00, 01 or 10");
            t.total_bits = fmt.cts_bits;
            break;
        case FrameKind::Ack:
            t.total_bits = fmt.ack_bits;
            break;
        case FrameKind::Data: {
            if (frame.payload_bits <= 0) throw EncodingError("DATA frame needs a payload");
            if (!mcs.has_index(frame.mcs_index)) throw EncodingError("DATA frame MCS index unknown");
            t.total_bits = fmt.mac_header_bits + frame.payload_bits;
            const std::int64_t hdr_bits = fmt.sc_phy_header_bits + fmt.control_phy_header_bits;
            const std::int64_t body_bits = fmt.mac_header_bits + frame.payload_bits;
            const std::int64_t rate = mcs.by_index(frame.mcs_index).data_rate_bps;
            // exact rational sum hdr/ctrl_rate + body/rate, one ceil
            const __int128 num = static_cast<__int128>(hdr_bits) * 1'000'000'000 * rate +
                                 static_cast<__int128>(body_bits) * 1'000'000'000 * fmt.control_rate_bps;
            const __int128 den = static_cast<__int128>(fmt.control_rate_bps) * rate;
            t.airtime_ns = static_cast<std::int64_t>((num + den - 1) / den);
            return t;
        }
    }
    t.airtime_ns = airtime_ns(t.total_bits + fmt.control_phy_header_bits, fmt.control_rate_bps);
    return t;
}

double two_node_fd_overhead_s(const FrameFormat& fmt, std::int64_t sifs_ns, std::int64_t difs_ns) {
    const double ctrl = static_cast<double>(fmt.control_rate_bps);
    const double rts = (fmt.control_phy_header_bits + fmt.rts_bits) / ctrl;
    const double cts = (fmt.control_phy_header_bits + fmt.cts_bits) / ctrl;
    const double ack = (fmt.control_phy_header_bits + fmt.ack_bits) / ctrl;
    const double data_hdr = (fmt.control_phy_header_bits + fmt.sc_phy_header_bits) / ctrl;
    return ns_to_seconds(difs_ns) + rts + cts + ack + data_hdr + 3 * ns_to_seconds(sifs_ns);
}

} // namespace mmfd
