#include "wps/transactions.hpp"

#include <algorithm>
#include <numeric>

namespace wps {

ItemId PageCatalog::add(const std::string& page) {
    auto it = index_.find(page);
    if (it != index_.end()) return it->second;
    ItemId id = static_cast<ItemId>(pages_.size());
    pages_.push_back(page);
    index_.emplace(page, id);
    return id;
}

std::optional<ItemId> PageCatalog::find(std::string_view page) const {
    auto it = index_.find(std::string(page));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

const std::string& PageCatalog::page(ItemId id) const {
    if (id >= pages_.size()) throw Error("page id out of range: " + std::to_string(id));
    return pages_[id];
}

std::uint64_t TransactionDb::total_items() const {
    std::uint64_t n = 0;
    for (const auto& tx : transactions) n += tx.items.size();
    return n;
}

double TransactionDb::avg_transaction_size() const {
    if (transactions.empty()) return 0.0;
    return static_cast<double>(total_items()) / static_cast<double>(transactions.size());
}

std::uint32_t TransactionDb::distinct_items() const {
    std::vector<bool> seen(universe_items, false);
    std::uint32_t n = 0;
    for (const auto& tx : transactions)
        for (ItemId i : tx.items)
            if (!seen[i]) {
                seen[i] = true;
                ++n;
            }
    return n;
}

std::string TransactionDb::item_key(ItemId id) const {
    if (catalog && id < catalog->size()) return catalog->page(id);
    return std::to_string(id);
}

void TransactionDb::add_transaction(std::vector<ItemId> items) {
    std::sort(items.begin(), items.end());
    auto last = std::unique(items.begin(), items.end());
    dedup_dropped += static_cast<std::uint64_t>(items.end() - last);
    items.erase(last, items.end());
    if (items.empty()) return;
    if (items.back() > kMaxItemId)
        throw Error("item id " + std::to_string(items.back()) + " exceeds the supported "
                    "maximum " + std::to_string(kMaxItemId));
    universe_items = std::max(universe_items, items.back() + 1);
    Transaction tx;
    tx.tid = static_cast<TxId>(transactions.size()) + 1;
    tx.items = std::move(items);
    transactions.push_back(std::move(tx));
}

std::vector<ItemStats> count_supports(const TransactionDb& db) {
    std::vector<std::uint32_t> counts = support_vector(db);
    std::vector<ItemStats> stats;
    for (ItemId i = 0; i < counts.size(); ++i)
        if (counts[i] > 0) stats.push_back({i, counts[i]});
    return stats;
}

std::vector<std::uint32_t> support_vector(const TransactionDb& db) {
    std::vector<std::uint32_t> counts(db.universe_items, 0);
    for (const auto& tx : db.transactions)
        for (ItemId i : tx.items) ++counts[i];
    return counts;
}

ItemOrder order_items(const std::vector<ItemStats>& stats, std::uint32_t universe,
                      const ItemKeyFn& key_of) {
    ItemOrder order;
    order.by_rank.reserve(stats.size());
    for (const auto& s : stats) order.by_rank.push_back(s.item);

    std::vector<std::uint32_t> support(universe, 0);
    std::vector<std::string> keys(universe);
    for (const auto& s : stats) {
        support[s.item] = s.support;
        keys[s.item] = key_of(s.item);
    }
    std::sort(order.by_rank.begin(), order.by_rank.end(), [&](ItemId a, ItemId b) {
        if (support[a] != support[b]) return support[a] > support[b];
        return natural_less(keys[a], keys[b]);
    });

    order.rank_of.assign(universe, kNoRank);
    for (std::uint32_t r = 0; r < order.by_rank.size(); ++r)
        order.rank_of[order.by_rank[r]] = r;
    return order;
}

ItemOrder order_items(const TransactionDb& db) {
    return order_items(count_supports(db), db.universe_items,
                       [&db](ItemId i) { return db.item_key(i); });
}

std::vector<ItemId> project_transaction(const Transaction& tx, const ItemOrder& order,
                                        std::optional<std::uint32_t> min_support,
                                        const std::vector<std::uint32_t>& supports) {
    std::vector<ItemId> out;
    out.reserve(tx.items.size());
    for (ItemId i : tx.items) {
        if (!order.contains(i)) continue;
        if (min_support && (i >= supports.size() || supports[i] < *min_support)) continue;
        out.push_back(i);
    }
    std::sort(out.begin(), out.end(),
              [&order](ItemId a, ItemId b) { return order.rank(a) < order.rank(b); });
    return out;
}

} // namespace wps
