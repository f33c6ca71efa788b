#ifndef WPS_STORAGE_HPP
#define WPS_STORAGE_HPP

#include <array>
#include <cstdint>
#include <fstream>
#include <list>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "wps/tree.hpp"

namespace wps {

struct StorageConfig {
    std::uint32_t block_size = 4096;
    double k_avg = 1.2; // path-correlation clustering threshold
    double k_sup = 0.0; // minimum relative support to enter the index
    std::uint16_t n_buckets = 26;
    std::uint32_t layer_high = 2;
    std::uint32_t layer_low = 2;
    std::size_t cache_capacity = 0; // blocks; 0 = unbounded
};

struct IoStats {
    std::uint64_t blocks_read = 0;
    std::uint64_t blocks_written = 0;
    std::uint64_t nodes_read = 0;
    std::uint64_t source_scans = 0;
};

/// On-disk node record: item, count, parent, first child, next sibling —
/// five little-endian u32 fields.
inline constexpr std::uint32_t kNodeRecordSize = 20;

struct StoredNode {
    ItemId item = kNoItem;
    std::uint32_t count = 0;
    NodeId parent = kNoNode;
    NodeId first_child = kNoNode;
    NodeId next_sibling = kNoNode;
};

/// Result of path-correlation clustering: every tree node mapped to a block
/// and a slot within it.
struct BlockAssignment {
    std::uint32_t n_blocks = 0;
    std::uint32_t nodes_per_block = 0;
    std::vector<std::uint32_t> block_of;
    std::vector<std::uint32_t> slot_of;
    std::vector<std::vector<NodeId>> block_nodes;
};

/// Packs the tree into fixed-size blocks. Edges where the parent subtree
/// density exceeds k_avg times the child subtree density split the tree into
/// correlation clusters; each cluster is placed depth-first (Excellent
/// children before Medium before Weak), into its branch parent's block when
/// it fits there, otherwise into fresh blocks without straddling when it
/// fits in one.
BlockAssignment cluster_paths(const WpsTree& tree, const LayerAssignment& layers,
                              const ItemOrder& order, const StorageConfig& cfg);

struct ItemInfo {
    ItemId id = kNoItem;
    std::string key;
    std::uint32_t support = 0;
    std::uint32_t rank = kNoRank;
};

/// Everything persisted next to the block file: item table, dataset facts,
/// build configuration and maintenance counters.
struct IndexMeta {
    std::vector<ItemInfo> items;
    std::uint32_t universe = 0;

    std::uint64_t n_transactions = 0;
    std::uint64_t total_items = 0;
    std::uint32_t n_distinct_items = 0;
    std::uint64_t dataset_size_bytes = 0;
    std::string source_path;
    std::uint64_t source_scans = 0;
    TxId tid_max = 0;

    std::uint32_t block_size = 4096;
    double k_avg = 1.2;
    double k_sup = 0.0;
    std::uint16_t n_buckets = 26;
    std::uint32_t layer_high = 2;
    std::uint32_t layer_low = 2;

    std::uint64_t nodes_created = 0; // non-root records
    std::uint64_t count_updates = 0;
    std::uint64_t hash_entries = 0;
    std::uint64_t appended_batches = 0;
    std::uint64_t appended_transactions = 0;

    bool order_descending = true;
    std::vector<std::string> catalog_pages; // empty unless log-sourced

    std::array<std::uint64_t, 3> layer_histogram{0, 0, 0};
    double creation_time_seconds = 0.0;
};

/// Mirrors the dataset/index characteristics table: transactions, items,
/// average transaction size, dataset size, record counts, creation time.
struct IndexStatsReport {
    std::string dataset;
    std::uint64_t n_transactions = 0;
    std::uint32_t n_items = 0;
    double avg_tr_size = 0.0;
    double size_kb = 0.0;
    std::uint64_t tree_records = 0;
    std::uint64_t hash_records = 0;
    double time_sec = 0.0;
};

std::string stats_csv_header();
std::string stats_to_csv(const IndexStatsReport& r);
std::string stats_to_json(const IndexStatsReport& r);

void write_index(const BuiltIndex& built, const LayerAssignment& layers,
                 const BlockAssignment& assignment, const IndexMeta& meta,
                 const std::string& base, IoStats* io = nullptr);

enum class OpenMode { ReadOnly, ReadWrite };

/// Read handle over a persisted index. The hash directory and metadata are
/// loaded eagerly; tree blocks are fetched on demand through a block cache.
/// Handles are single-threaded; concurrent readers each open their own.
class IndexHandle {
public:
    IndexHandle(const IndexHandle&) = delete;
    IndexHandle& operator=(const IndexHandle&) = delete;
    IndexHandle(IndexHandle&&) = default;
    IndexHandle& operator=(IndexHandle&&) = default;

    NodeId root() const { return 0; }
    StoredNode node(NodeId id);

    /// All (node, count) occurrences of the item, by chain traversal within
    /// the item's bucket. Empty when the item is absent.
    std::vector<std::pair<NodeId, std::uint32_t>> occurrences(ItemId item) const;

    const IndexMeta& meta() const { return meta_; }
    const std::vector<ItemInfo>& items() const { return meta_.items; }
    std::optional<ItemId> item_by_key(std::string_view key) const;
    std::uint32_t support(ItemId id) const;
    std::uint32_t rank(ItemId id) const;
    std::string item_key(ItemId id) const;
    bool has_item(ItemId id) const;
    bool order_descending() const { return meta_.order_descending; }

    std::uint64_t n_node_records() const { return n_nodes_; } // includes root
    std::uint32_t n_blocks() const { return n_blocks_; }
    std::uint32_t nodes_per_block() const { return nodes_per_block_; }
    std::uint32_t block_of(NodeId id) const { return id / nodes_per_block_; }

    OpenMode mode() const { return mode_; }
    const std::string& base_path() const { return base_; }

    IoStats& io() { return io_; }
    const IoStats& io() const { return io_; }
    void clear_cache();

    /// Re-reads all files after an in-place update; counters survive.
    void reload();

    friend IndexHandle open_index(const std::string& base, OpenMode mode,
                                  std::size_t cache_capacity);

private:
    IndexHandle() = default;
    void load_files();
    const std::vector<std::uint8_t>& block(std::uint32_t b);

    std::string base_;
    OpenMode mode_ = OpenMode::ReadOnly;
    IndexMeta meta_;
    std::uint64_t n_nodes_ = 0;
    std::uint32_t n_blocks_ = 0;
    std::uint32_t nodes_per_block_ = 0;

    std::vector<std::vector<std::tuple<ItemId, NodeId, std::uint32_t>>> hash_buckets_;
    std::unordered_map<ItemId, std::size_t> item_index_;

    std::unique_ptr<std::ifstream> file_;
    std::unordered_map<std::uint32_t, std::vector<std::uint8_t>> cache_;
    std::list<std::uint32_t> lru_;
    std::size_t cache_capacity_ = 0;
    IoStats io_;
};

IndexHandle open_index(const std::string& base, OpenMode mode = OpenMode::ReadOnly,
                       std::size_t cache_capacity = 0);

StoredNode read_node(IndexHandle& handle, NodeId id);

IndexStatsReport index_stats(const IndexHandle& handle);

struct BuildOutputs {
    IndexStatsReport stats;
    IoStats io;
};

/// Full build pipeline: order items, build the tree and hash index, assign
/// layers, cluster into blocks and persist. The staged db is the single scan
/// of the source; io.source_scans reports it.
BuildOutputs build_and_write(const TransactionDb& db, const StorageConfig& cfg,
                             const std::string& base);

std::uint32_t crc32(const std::uint8_t* data, std::size_t len, std::uint32_t seed = 0);

} // namespace wps

#endif
