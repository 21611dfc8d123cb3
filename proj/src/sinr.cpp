#include "mmfd/sinr.hpp"

namespace mmfd {

double listener_gain(const RadioNode& rx, const Listening& listening, Position source) {
    if (listening.quasi_omni) return quasi_omni_gain();
    const BeamPointing beam = beam_toward(rx.antenna, rx.pos, listening.toward, BeamRole::Receive);
    return rx_gain(rx.antenna, beam, source, rx.pos);
}

double transmission_power_at(const ActiveTransmission& t, const RadioNode& rx,
                             const Listening& listening, const ChannelParams& params) {
    if (t.tx.pos == rx.pos) return 0.0; // self; handled as residual SI
    const BeamPointing tx_beam = beam_toward(t.tx.antenna, t.tx.pos, t.aimed_at, BeamRole::Transmit);
    const double g_tx = tx_gain(t.tx.antenna, tx_beam, rx.pos, t.tx.pos);
    if (g_tx == 0.0) return 0.0;
    const double g_rx = listener_gain(rx, listening, t.tx.pos);
    if (g_rx == 0.0) return 0.0;
    return received_power(t.power_w, g_tx, g_rx, path_gain(params, t.tx.pos, rx.pos));
}

SinrBreakdown sinr(const ReceiverState& receiver, const ActiveTransmission& wanted,
                   const std::vector<ActiveTransmission>& concurrent,
                   const ChannelParams& params, const SinrOptions& opts) {
    SinrBreakdown out;
    out.noise_w = params.noise_w;
    out.signal_w = transmission_power_at(wanted, receiver.node, receiver.listening, params);
    if (receiver.transmitting) {
        out.residual_si_w = residual_si(receiver.tx_power_w, receiver.si_beta);
    }
    for (const auto& t : concurrent) {
        const double p = transmission_power_at(t, receiver.node, receiver.listening, params);
        if (t.link != kNoLink && t.link == wanted.link) {
            if (opts.include_ibi) out.ibi_w += p;
        } else {
            out.co_channel_w += p;
        }
    }
    out.sinr = out.signal_w / out.interference_total();
    return out;
}

} // namespace mmfd
