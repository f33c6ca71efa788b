#ifndef WPS_GENERATOR_HPP
#define WPS_GENERATOR_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "wps/common.hpp"

namespace wps {

enum class GenKind { Dense, Sparse };

struct GenConfig {
    GenKind kind = GenKind::Dense;
    std::uint64_t n_transactions = 0;
    std::uint32_t n_items = 38;
    double avg_size = 7.0;
    std::uint64_t seed = 1;
};

/// Synthetic market-basket style transactions over item ids 0..n_items-1,
/// deterministic for a fixed seed (platform-independent RNG).
///
/// Dense: transactions sampled around a handful of pattern templates plus
/// noise, giving strong co-occurrence and prefix sharing. Sparse: power-law
/// item popularity over the whole universe, weak correlation.
std::vector<std::vector<ItemId>> generate_transactions(const GenConfig& cfg);

void write_fimi(const std::string& path, const std::vector<std::vector<ItemId>>& rows);

} // namespace wps

#endif
