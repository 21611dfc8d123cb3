#pragma once

#include "mmfd/geometry.hpp"

#include <stdexcept>

namespace mmfd {

/// Sectorized flat-top beam antenna: M beams of width 2*pi/M covering all
/// directions, peak gain equal to M inside the pointed beam and zero outside.
struct AntennaConfig {
    int beam_count = 1;

    double beamwidth() const { return kTwoPi / beam_count; }
    double peak_gain() const { return static_cast<double>(beam_count); }
};

enum class BeamRole { Transmit, Receive };

/// A beam pointed at an absolute boresight angle in [0, 2*pi).
struct BeamPointing {
    double boresight = 0;
    BeamRole role = BeamRole::Transmit;
};

/// Gain toward a target for a pointed beam. The main lobe is the half-open
/// cone (-w/2, w/2] around the boresight so that the M beams partition all
/// directions; a target on the shared edge of two beams belongs to the
/// lower-indexed one.
double beam_gain(const AntennaConfig& antenna, const BeamPointing& beam,
                 Position target, Position self);

inline double tx_gain(const AntennaConfig& antenna, const BeamPointing& beam,
                      Position target, Position self) {
    return beam_gain(antenna, beam, target, self);
}

inline double rx_gain(const AntennaConfig& antenna, const BeamPointing& beam,
                      Position source, Position self) {
    return beam_gain(antenna, beam, source, self);
}

/// Unit gain used while a node listens quasi-omnidirectionally (idle and
/// backoff states, and RTS reception).
constexpr double quasi_omni_gain() { return 1.0; }

/// Index of the beam whose cone contains the direction from `self` to
/// `target`; beam k spans bearings ((k-1/2)*w, (k+1/2)*w] around k*w.
int beam_index_toward(const AntennaConfig& antenna, Position self, Position target);

/// Beam pointed at the cone containing `target` (boresight of that beam).
BeamPointing beam_toward(const AntennaConfig& antenna, Position self, Position target,
                         BeamRole role);

} // namespace mmfd
