#ifndef WPS_BENCH_HPP
#define WPS_BENCH_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "wps/storage.hpp"

namespace wps {

/// One queried item, accessed twice: through the hash index (occurrences +
/// ancestor walks) and through a full depth-first tree scan.
struct ItemBenchRow {
    ItemId item = kNoItem;
    std::string key;
    std::uint64_t hash_nodes_read = 0;
    std::uint64_t scan_nodes_read = 0;
    std::uint64_t hash_blocks_read = 0;
    std::uint64_t scan_blocks_read = 0;
    double hash_ms = 0.0;
    double scan_ms = 0.0;

    double node_ratio() const {
        return hash_nodes_read == 0
                   ? 0.0
                   : static_cast<double>(scan_nodes_read) /
                         static_cast<double>(hash_nodes_read);
    }
};

struct MineBenchRow {
    std::uint32_t min_support = 0;
    std::size_t n_itemsets = 0;
    std::uint64_t nodes_read = 0;
    std::uint64_t blocks_read = 0;
    double fp_ms = 0.0;
};

struct BenchReport {
    std::vector<ItemBenchRow> items;
    std::vector<MineBenchRow> mining;
    double mean_node_ratio = 0.0;
};

/// Counter ratios are the hardware-independent result; wall times are
/// reported alongside but carry no guarantees.
BenchReport run_bench(IndexHandle& handle, const std::vector<ItemId>& items,
                      const std::vector<std::uint32_t>& min_supports);

std::string bench_to_json(const BenchReport& report);
std::string bench_to_csv(const BenchReport& report);

} // namespace wps

#endif
