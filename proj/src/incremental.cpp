#include "wps/incremental.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <unordered_map>

#include <json.hpp>

namespace wps {

namespace {

struct Materialized {
    WpsTree tree;
    WpsHashIndex hash{26};
    std::unordered_map<NodeId, NodeId> mem_of_phys;
};

std::string key_for(const IndexMeta& meta, ItemId id) {
    if (id < meta.catalog_pages.size()) return meta.catalog_pages[id];
    return std::to_string(id);
}

/// Reads the whole stored tree and its hash chains back into memory. Sibling
/// chains are written in rank order, so grafting in traversal order keeps
/// children rank-sorted.
Materialized materialize(IndexHandle& handle) {
    Materialized m;
    m.hash = WpsHashIndex(handle.meta().n_buckets);
    m.tree.seed_count_updates(handle.meta().count_updates);
    m.mem_of_phys[handle.root()] = m.tree.root();

    std::function<void(NodeId, NodeId)> descend = [&](NodeId phys, NodeId mem) {
        StoredNode n = handle.node(phys);
        NodeId c = n.first_child;
        while (c != kNoNode) {
            StoredNode cn = handle.node(c);
            NodeId cm = m.tree.graft(mem, cn.item, cn.count);
            m.mem_of_phys[c] = cm;
            descend(c, cm);
            c = cn.next_sibling;
        }
    };
    descend(handle.root(), m.tree.root());

    const IndexMeta& meta = handle.meta();
    for (const ItemInfo& info : meta.items)
        for (const auto& [phys, count] : handle.occurrences(info.id)) {
            (void)count;
            m.hash.add(info.id, info.key, m.mem_of_phys.at(phys));
        }
    return m;
}

ItemOrder order_from_meta(const IndexMeta& meta, std::uint32_t universe) {
    ItemOrder order;
    order.rank_of.assign(universe, kNoRank);
    for (const ItemInfo& info : meta.items) order.rank_of[info.id] = info.rank;
    std::vector<ItemId> by_rank;
    for (const ItemInfo& info : meta.items) by_rank.push_back(info.id);
    std::sort(by_rank.begin(), by_rank.end(),
              [&](ItemId a, ItemId b) { return order.rank_of[a] < order.rank_of[b]; });
    order.by_rank = std::move(by_rank);
    return order;
}

bool ranks_support_descending(const ItemOrder& order,
                              const std::vector<std::uint32_t>& supports) {
    for (std::size_t i = 1; i < order.by_rank.size(); ++i)
        if (supports[order.by_rank[i - 1]] < supports[order.by_rank[i]]) return false;
    return true;
}

void rewrite(IndexHandle& handle, BuiltIndex built, IndexMeta meta) {
    StorageConfig cfg;
    cfg.block_size = meta.block_size;
    cfg.k_avg = meta.k_avg;
    cfg.k_sup = meta.k_sup;
    cfg.n_buckets = meta.n_buckets;
    cfg.layer_high = meta.layer_high;
    cfg.layer_low = meta.layer_low;
    LayerAssignment layers = assign_layers(built.supports, cfg.layer_high, cfg.layer_low);
    BlockAssignment assignment = cluster_paths(built.tree, layers, built.order, cfg);
    write_index(built, layers, assignment, meta, handle.base_path(), &handle.io());
    handle.reload();
}

} // namespace

UpdateReport append_transactions(IndexHandle& handle, const DeltaBatch& batch) {
    if (handle.mode() != OpenMode::ReadWrite)
        throw Error("append: index is opened read-only");
    if (handle.meta().k_sup != 0.0)
        throw ConfigError("append: index was built with k_sup > 0; filtered items "
                          "cannot be recovered, rebuild with k_sup = 0");

    const std::uint64_t scans_before = handle.io().source_scans;
    IndexMeta meta = handle.meta();

    // Tid discipline: explicit tids must stay above the stored range.
    std::set<TxId> seen;
    for (const Transaction& tx : batch.transactions) {
        if (tx.tid == 0) continue;
        if (tx.tid <= meta.tid_max || !seen.insert(tx.tid).second)
            throw Error("append: tid " + std::to_string(tx.tid) +
                        " collides with the existing index");
    }

    Materialized mat = materialize(handle);

    std::uint32_t universe = meta.universe;
    for (const Transaction& tx : batch.transactions)
        for (ItemId i : tx.items) {
            if (i > kMaxItemId)
                throw Error("append: item id " + std::to_string(i) +
                            " exceeds the supported maximum " + std::to_string(kMaxItemId));
            universe = std::max(universe, i + 1);
        }
    if (!batch.catalog_pages.empty()) {
        if (batch.catalog_pages.size() < meta.catalog_pages.size())
            throw ConfigError("append: batch catalog covers fewer pages than the index");
        meta.catalog_pages = batch.catalog_pages;
    }

    ItemOrder order = order_from_meta(meta, universe);
    std::vector<std::uint32_t> supports(universe, 0);
    for (const ItemInfo& info : meta.items) supports[info.id] = info.support;

    // New items rank after every existing one, ordered by key among
    // themselves; the stored order stays frozen.
    UpdateReport report;
    {
        std::set<ItemId> fresh;
        for (const Transaction& tx : batch.transactions)
            for (ItemId i : tx.items)
                if (order.rank_of[i] == kNoRank) fresh.insert(i);
        std::vector<ItemId> new_items(fresh.begin(), fresh.end());
        std::sort(new_items.begin(), new_items.end(), [&](ItemId a, ItemId b) {
            return natural_less(key_for(meta, a), key_for(meta, b));
        });
        std::uint32_t next_rank = 0;
        for (const ItemInfo& info : meta.items)
            next_rank = std::max(next_rank, info.rank + 1);
        for (ItemId i : new_items) {
            order.rank_of[i] = next_rank++;
            order.by_rank.push_back(i);
        }
        report.new_items = std::move(new_items);
    }

    TxId next_tid = meta.tid_max + 1;
    report.tid_min = 0;
    for (const Transaction& tx : batch.transactions) {
        std::vector<ItemId> items = tx.items;
        std::sort(items.begin(), items.end());
        items.erase(std::unique(items.begin(), items.end()), items.end());
        if (items.empty()) {
            ++report.empty_dropped;
            continue;
        }
        TxId tid = tx.tid == 0 ? next_tid : tx.tid;
        next_tid = std::max(next_tid, tid + 1);
        if (report.tid_min == 0) report.tid_min = tid;
        report.tid_min = std::min(report.tid_min, tid);
        report.tid_max = std::max(report.tid_max, tid);

        std::vector<ItemId> proj;
        proj.reserve(items.size());
        for (ItemId i : items) proj.push_back(i);
        std::sort(proj.begin(), proj.end(), [&](ItemId a, ItemId b) {
            return order.rank_of[a] < order.rank_of[b];
        });

        InsertOutcome outcome = mat.tree.insert(proj, order);
        for (NodeId n : outcome.created_nodes) {
            ItemId item = mat.tree.node(n).item;
            mat.hash.add(item, key_for(meta, item), n);
        }
        report.nodes_created += outcome.nodes_created();
        report.counts_incremented += outcome.counts_incremented;
        for (ItemId i : items) ++supports[i];

        ++report.transactions_appended;
        meta.total_items += items.size();
    }

    // Refresh the item table under the frozen ranks.
    meta.items.clear();
    std::vector<ItemId> with_rank;
    for (ItemId i = 0; i < universe; ++i)
        if (order.rank_of[i] != kNoRank && supports[i] > 0) with_rank.push_back(i);
    for (ItemId i : with_rank)
        meta.items.push_back({i, key_for(meta, i), supports[i], order.rank_of[i]});

    meta.universe = universe;
    meta.n_transactions += report.transactions_appended;
    meta.n_distinct_items = static_cast<std::uint32_t>(with_rank.size());
    meta.tid_max = std::max(meta.tid_max, report.tid_max);
    meta.appended_batches += 1;
    meta.appended_transactions += report.transactions_appended;
    meta.order_descending = ranks_support_descending(order, supports);

    BuiltIndex built;
    built.tree = std::move(mat.tree);
    built.hash = std::move(mat.hash);
    built.order = std::move(order);
    built.supports = std::move(supports);
    rewrite(handle, std::move(built), std::move(meta));

    report.source_scans_during_append = handle.io().source_scans - scans_before;
    return report;
}

void reorder_rebuild(IndexHandle& handle) {
    if (handle.mode() != OpenMode::ReadWrite)
        throw Error("reorder_rebuild: index is opened read-only");

    IndexMeta meta = handle.meta();
    Materialized mat = materialize(handle);
    auto multiset = mat.tree.reconstruct();

    std::vector<std::uint32_t> supports(meta.universe, 0);
    for (const auto& [items, mult] : multiset)
        for (ItemId i : items) supports[i] += static_cast<std::uint32_t>(mult);

    std::vector<ItemStats> stats;
    for (ItemId i = 0; i < supports.size(); ++i)
        if (supports[i] > 0) stats.push_back({i, supports[i]});
    ItemOrder order = order_items(stats, meta.universe,
                                  [&](ItemId i) { return key_for(meta, i); });

    BuiltIndex built;
    built.hash = WpsHashIndex(meta.n_buckets);
    built.order = order;
    built.supports = supports;
    for (const auto& [items, mult] : multiset) {
        std::vector<ItemId> proj = items;
        std::sort(proj.begin(), proj.end(), [&](ItemId a, ItemId b) {
            return order.rank(a) < order.rank(b);
        });
        InsertOutcome outcome =
            built.tree.insert(proj, order, static_cast<std::uint32_t>(mult));
        for (NodeId n : outcome.created_nodes) {
            ItemId item = built.tree.node(n).item;
            built.hash.add(item, key_for(meta, item), n);
        }
    }

    meta.items.clear();
    for (const ItemStats& s : stats)
        meta.items.push_back({s.item, key_for(meta, s.item), s.support, order.rank(s.item)});
    meta.order_descending = true;

    rewrite(handle, std::move(built), std::move(meta));
}

std::string update_report_json(const UpdateReport& report, const IndexHandle& handle) {
    nlohmann::json new_items = nlohmann::json::array();
    for (ItemId i : report.new_items) new_items.push_back(handle.item_key(i));
    nlohmann::json j{{"transactions_appended", report.transactions_appended},
                     {"empty_dropped", report.empty_dropped},
                     {"nodes_created", report.nodes_created},
                     {"counts_incremented", report.counts_incremented},
                     {"new_items", new_items},
                     {"source_scans_during_append", report.source_scans_during_append},
                     {"tid_min", report.tid_min},
                     {"tid_max", report.tid_max}};
    return j.dump(2);
}

} // namespace wps
