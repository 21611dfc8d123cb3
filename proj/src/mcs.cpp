#include "mmfd/mcs.hpp"

#include "mmfd/units.hpp"

namespace mmfd {

McsTable::McsTable(std::vector<McsEntry> entries) : entries_(std::move(entries)) {
    for (std::size_t i = 1; i < entries_.size(); ++i) {
        const bool ok = entries_[i].data_rate_bps > entries_[i - 1].data_rate_bps &&
                        entries_[i].sinr_threshold > entries_[i - 1].sinr_threshold;
        if (!ok) {
            throw std::invalid_argument(
                "McsTable: entries must be strictly increasing in rate and threshold");
        }
    }
}

McsTable McsTable::default_table() {
    return McsTable({
        {1, "QPSK", 1, 2, 952'000'000, db_to_linear(5.5)},
        {2, "QPSK", 2, 3, 1'904'000'000, db_to_linear(13.0)},
        {3, "16-QAM", 2, 3, 3'807'000'000, db_to_linear(18.0)},
    });
}

std::optional<McsEntry> McsTable::match(double sinr_linear) const {
    std::optional<McsEntry> best;
    for (const auto& e : entries_) {
        if (e.sinr_threshold <= sinr_linear) best = e;
    }
    return best;
}

const McsEntry& McsTable::by_index(int index) const {
    for (const auto& e : entries_) {
        if (e.index == index) return e;
    }
    throw std::out_of_range("McsTable: no entry with index " + std::to_string(index));
}

bool McsTable::has_index(int index) const {
    for (const auto& e : entries_) {
        if (e.index == index) return true;
    }
    return false;
}

} // namespace mmfd
