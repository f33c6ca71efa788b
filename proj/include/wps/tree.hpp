#ifndef WPS_TREE_HPP
#define WPS_TREE_HPP

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string_view>
#include <vector>

#include "wps/transactions.hpp"

namespace wps {

struct WpsNode {
    ItemId item = kNoItem; // kNoItem on the root
    std::uint32_t count = 0;
    NodeId parent = kNoNode;
    std::vector<NodeId> children; // ordered by item rank
};

struct InsertOutcome {
    std::vector<NodeId> created_nodes;
    std::uint32_t counts_incremented = 0;

    std::uint32_t nodes_created() const {
        return static_cast<std::uint32_t>(created_nodes.size());
    }
};

/// Prefix tree over rank-ordered transactions. Node counts record how many
/// inserted transactions pass through the node.
class WpsTree {
public:
    WpsTree() { nodes_.emplace_back(); }

    NodeId root() const { return 0; }
    const WpsNode& node(NodeId id) const { return nodes_[id]; }
    std::size_t node_count() const { return nodes_.size(); } // includes root
    std::uint64_t count_updates() const { return count_updates_; }

    NodeId find_child(NodeId parent, ItemId item) const;

    /// Inserts one transaction whose items must be strictly increasing in
    /// rank. Matching prefix nodes get their counts bumped; the remaining
    /// suffix is created with count = multiplicity.
    InsertOutcome insert(std::span<const ItemId> items, const ItemOrder& order,
                         std::uint32_t multiplicity = 1);

    /// Rebuilds the represented transaction multiset: every node with a
    /// residual count (count minus the sum of its children) contributes its
    /// root path that many times. Keys are ascending-id item lists.
    std::map<std::vector<ItemId>, std::uint64_t> reconstruct() const;

    /// Appends a child node verbatim (used when materializing a stored tree;
    /// callers must preserve rank order across siblings).
    NodeId graft(NodeId parent, ItemId item, std::uint32_t count);

    /// Restores the historical update counter of a materialized tree.
    void seed_count_updates(std::uint64_t n) { count_updates_ = n; }

private:
    std::vector<WpsNode> nodes_;
    std::uint64_t count_updates_ = 0;
};

/// Bucket of an item key. Single-letter keys with the default 26 buckets map
/// a->0 .. z->25; everything else hashes (FNV-1a) modulo n_buckets.
std::uint32_t hash_bucket(std::string_view key, std::uint16_t n_buckets);

struct HashEntry {
    ItemId item = kNoItem;
    NodeId node = kNoNode;
};

/// Occurrence index: for each item, the locations of all its tree nodes,
/// chained per bucket in node-creation order.
class WpsHashIndex {
public:
    explicit WpsHashIndex(std::uint16_t n_buckets = 26);

    std::uint16_t bucket_count() const { return n_buckets_; }
    std::size_t entry_count() const { return entries_; }
    const std::vector<std::vector<HashEntry>>& buckets() const { return buckets_; }

    void add(ItemId item, std::string_view key, NodeId node);

    /// All (node, count) occurrences of the item, in chain order.
    std::vector<std::pair<NodeId, std::uint32_t>> lookup(ItemId item, std::string_view key,
                                                         const WpsTree& tree) const;

private:
    std::uint16_t n_buckets_;
    std::vector<std::vector<HashEntry>> buckets_;
    std::size_t entries_ = 0;
};

enum class Layer : std::uint8_t { Excellent = 0, Medium = 1, Weak = 2 };

/// Node partition driven by item support: support >= high is Excellent,
/// low <= support < high is Medium, the rest is Weak.
struct LayerAssignment {
    std::uint32_t high = 2;
    std::uint32_t low = 2;
    std::vector<Layer> item_layer; // universe-sized

    Layer of_item(ItemId id) const {
        return id < item_layer.size() ? item_layer[id] : Layer::Weak;
    }
    Layer of_node(const WpsNode& n) const {
        return n.item == kNoItem ? Layer::Excellent : of_item(n.item);
    }
    std::array<std::uint64_t, 3> node_histogram(const WpsTree& tree) const;
};

LayerAssignment assign_layers(const std::vector<std::uint32_t>& supports, std::uint32_t high,
                              std::uint32_t low);

struct BuildConfig {
    double k_sup = 0.0; // minimum relative support to enter the index
    std::uint16_t n_buckets = 26;
};

struct BuiltIndex {
    WpsTree tree;
    WpsHashIndex hash{26};
    ItemOrder order;
    std::vector<std::uint32_t> supports; // universe-sized
    std::uint64_t projected_item_insertions = 0;
    std::uint32_t build_min_support = 0; // absolute k_sup cutoff applied
};

/// Single-pass index construction over the staged db: every transaction is
/// projected, sorted and inserted; each created node is registered in the
/// hash index.
BuiltIndex build_index(const TransactionDb& db, const ItemOrder& order,
                       const BuildConfig& cfg = {});

} // namespace wps

#endif
