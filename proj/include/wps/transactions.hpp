#ifndef WPS_TRANSACTIONS_HPP
#define WPS_TRANSACTIONS_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "wps/common.hpp"

namespace wps {

/// One visitor session: a duplicate-free, ascending-id item set.
struct Transaction {
    TxId tid = 0;
    std::vector<ItemId> items;
};

/// Bijection between page strings and dense item ids (0-based).
class PageCatalog {
public:
    ItemId add(const std::string& page);
    std::optional<ItemId> find(std::string_view page) const;
    const std::string& page(ItemId id) const;
    std::uint32_t size() const { return static_cast<std::uint32_t>(pages_.size()); }

private:
    std::vector<std::string> pages_;
    std::unordered_map<std::string, ItemId> index_;
};

/// The staged relation: every transaction of the source, held in memory after
/// a single scan. Immutable once loaded; all counting and tree construction
/// work off this copy.
struct TransactionDb {
    std::vector<Transaction> transactions;
    /// Size of the dense item-id space (max id + 1, or the catalog size).
    std::uint32_t universe_items = 0;
    /// Present when the db came from sessionized logs; provides page keys.
    std::optional<PageCatalog> catalog;

    /// How many times the original source was scanned to produce this db.
    std::uint64_t source_scans = 0;
    std::uint64_t dedup_dropped = 0;
    std::uint64_t source_bytes = 0;
    std::string source_path;

    std::size_t size() const { return transactions.size(); }
    std::uint64_t total_items() const;
    double avg_transaction_size() const;
    std::uint32_t distinct_items() const;

    /// Sort key / display key of an item: catalog page if present, else the
    /// decimal token.
    std::string item_key(ItemId id) const;

    /// Appends a transaction, deduplicating items (counted in dedup_dropped),
    /// assigning the next tid and growing the universe. Empty sets are dropped.
    void add_transaction(std::vector<ItemId> items);
};

struct ItemStats {
    ItemId item = kNoItem;
    std::uint32_t support = 0;
};

/// Total order over items: descending support, ties by ascending item key.
struct ItemOrder {
    std::vector<ItemId> by_rank;
    std::vector<std::uint32_t> rank_of; // universe-sized, kNoRank when absent

    std::uint32_t rank(ItemId id) const {
        return id < rank_of.size() ? rank_of[id] : kNoRank;
    }
    bool contains(ItemId id) const { return rank(id) != kNoRank; }
    std::size_t size() const { return by_rank.size(); }
};

/// Support of every item present in the db, ascending by item id.
std::vector<ItemStats> count_supports(const TransactionDb& db);

/// Universe-sized support lookup vector (0 for absent items).
std::vector<std::uint32_t> support_vector(const TransactionDb& db);

using ItemKeyFn = std::function<std::string(ItemId)>;

ItemOrder order_items(const std::vector<ItemStats>& stats, std::uint32_t universe,
                      const ItemKeyFn& key_of);
ItemOrder order_items(const TransactionDb& db);

/// Items of tx with support >= min_support (when given), sorted by ascending
/// rank. Items without a rank are dropped.
std::vector<ItemId> project_transaction(const Transaction& tx, const ItemOrder& order,
                                        std::optional<std::uint32_t> min_support,
                                        const std::vector<std::uint32_t>& supports);

} // namespace wps

#endif
