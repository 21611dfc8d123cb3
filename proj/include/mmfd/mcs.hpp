#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mmfd {

/// One modulation and coding scheme tier.
struct McsEntry {
    int index = 0;
    std::string modulation;
    int coding_num = 1;
    int coding_den = 1;
    std::int64_t data_rate_bps = 0;
    double sinr_threshold = 1.0; ///< linear
};

/// Rate table ordered by index; strictly increasing in both data rate and
/// SINR threshold.
class McsTable {
public:
    McsTable() = default;
    explicit McsTable(std::vector<McsEntry> entries);

    /// Default three-tier table: QPSK 1/2 at 952 Mbps (5.5 dB), QPSK 2/3 at
    /// 1904 Mbps (13 dB), 16-QAM 2/3 at 3807 Mbps (18 dB).
    static McsTable default_table();

    const std::vector<McsEntry>& entries() const { return entries_; }

    /// Highest tier whose threshold is <= sinr; nullopt below the first tier.
    std::optional<McsEntry> match(double sinr_linear) const;

    const McsEntry& by_index(int index) const;
    bool has_index(int index) const;

private:
    std::vector<McsEntry> entries_;
};

} // namespace mmfd
