#include "wps/bench.hpp"

#include <chrono>
#include <sstream>

#include <json.hpp>

#include "wps/access.hpp"
#include "wps/mining.hpp"

namespace wps {

namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

} // namespace

BenchReport run_bench(IndexHandle& handle, const std::vector<ItemId>& items,
                      const std::vector<std::uint32_t>& min_supports) {
    BenchReport report;

    for (ItemId item : items) {
        ItemBenchRow row;
        row.item = item;
        row.key = handle.item_key(item);

        handle.clear_cache();
        IoStats before = handle.io();
        auto t0 = std::chrono::steady_clock::now();
        auto via_hash = prefix_paths(handle, item);
        row.hash_ms = ms_since(t0);
        row.hash_nodes_read = handle.io().nodes_read - before.nodes_read;
        row.hash_blocks_read = handle.io().blocks_read - before.blocks_read;

        handle.clear_cache();
        before = handle.io();
        t0 = std::chrono::steady_clock::now();
        auto via_scan = prefix_paths_by_scan(handle, item);
        row.scan_ms = ms_since(t0);
        row.scan_nodes_read = handle.io().nodes_read - before.nodes_read;
        row.scan_blocks_read = handle.io().blocks_read - before.blocks_read;

        if (via_hash.size() != via_scan.size())
            throw Error("bench: access methods disagree for item " + row.key);
        report.items.push_back(std::move(row));
    }

    double ratio_sum = 0.0;
    std::size_t counted = 0;
    for (const auto& row : report.items)
        if (row.hash_nodes_read > 0) {
            ratio_sum += row.node_ratio();
            ++counted;
        }
    report.mean_node_ratio = counted == 0 ? 0.0 : ratio_sum / static_cast<double>(counted);

    for (std::uint32_t ms : min_supports) {
        MineBenchRow row;
        row.min_support = ms;
        handle.clear_cache();
        IoStats before = handle.io();
        auto t0 = std::chrono::steady_clock::now();
        row.n_itemsets = mine_fp(handle, ms).size();
        row.fp_ms = ms_since(t0);
        row.nodes_read = handle.io().nodes_read - before.nodes_read;
        row.blocks_read = handle.io().blocks_read - before.blocks_read;
        report.mining.push_back(row);
    }
    return report;
}

std::string bench_to_json(const BenchReport& report) {
    nlohmann::json items = nlohmann::json::array();
    for (const auto& r : report.items)
        items.push_back({{"item", r.item},
                         {"key", r.key},
                         {"hash_nodes_read", r.hash_nodes_read},
                         {"scan_nodes_read", r.scan_nodes_read},
                         {"hash_blocks_read", r.hash_blocks_read},
                         {"scan_blocks_read", r.scan_blocks_read},
                         {"hash_ms", r.hash_ms},
                         {"scan_ms", r.scan_ms},
                         {"node_ratio", r.node_ratio()}});
    nlohmann::json mining = nlohmann::json::array();
    for (const auto& r : report.mining)
        mining.push_back({{"min_support", r.min_support},
                          {"n_itemsets", r.n_itemsets},
                          {"nodes_read", r.nodes_read},
                          {"blocks_read", r.blocks_read},
                          {"fp_ms", r.fp_ms}});
    return nlohmann::json{{"items", items},
                          {"mining", mining},
                          {"mean_node_ratio", report.mean_node_ratio}}
        .dump(2);
}

std::string bench_to_csv(const BenchReport& report) {
    std::ostringstream os;
    os << "key,hash_nodes_read,scan_nodes_read,hash_blocks_read,scan_blocks_read,"
          "hash_ms,scan_ms,node_ratio\n";
    for (const auto& r : report.items)
        os << r.key << ',' << r.hash_nodes_read << ',' << r.scan_nodes_read << ','
           << r.hash_blocks_read << ',' << r.scan_blocks_read << ',' << r.hash_ms << ','
           << r.scan_ms << ',' << r.node_ratio() << '\n';
    os << "min_support,n_itemsets,nodes_read,blocks_read,fp_ms\n";
    for (const auto& r : report.mining)
        os << r.min_support << ',' << r.n_itemsets << ',' << r.nodes_read << ','
           << r.blocks_read << ',' << r.fp_ms << '\n';
    return os.str();
}

} // namespace wps
