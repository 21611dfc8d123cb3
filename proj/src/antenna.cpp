#include "mmfd/antenna.hpp"

#include <cmath>

namespace mmfd {

double beam_gain(const AntennaConfig& antenna, const BeamPointing& beam,
                 Position target, Position self) {
    if (target == self) {
        throw std::invalid_argument("beam_gain: target coincides with antenna position");
    }
    const double offset = angle_diff(bearing(self, target), beam.boresight);
    const double half = antenna.beamwidth() / 2.0;
    return (offset > -half && offset <= half) ? antenna.peak_gain() : 0.0;
}

int beam_index_toward(const AntennaConfig& antenna, Position self, Position target) {
    if (target == self) {
        throw std::invalid_argument("beam_index_toward: target coincides with antenna position");
    }
    const double w = antenna.beamwidth();
    const double phi = bearing(self, target);
    // beam k covers ((k-1/2)w, (k+1/2)w]
    int k = static_cast<int>(std::ceil(phi / w - 0.5));
    if (k >= antenna.beam_count) k -= antenna.beam_count;
    if (k < 0) k += antenna.beam_count;
    return k;
}

BeamPointing beam_toward(const AntennaConfig& antenna, Position self, Position target,
                         BeamRole role) {
    const int k = beam_index_toward(antenna, self, target);
    return BeamPointing{k * antenna.beamwidth(), role};
}

} // namespace mmfd
