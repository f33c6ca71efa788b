#include "wps/tree.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace wps {

NodeId WpsTree::find_child(NodeId parent, ItemId item) const {
    for (NodeId c : nodes_[parent].children)
        if (nodes_[c].item == item) return c;
    return kNoNode;
}

InsertOutcome WpsTree::insert(std::span<const ItemId> items, const ItemOrder& order,
                              std::uint32_t multiplicity) {
    for (std::size_t i = 1; i < items.size(); ++i)
        if (order.rank(items[i - 1]) >= order.rank(items[i]))
            throw std::invalid_argument(
                "insert: items must be strictly increasing in rank");
    if (multiplicity == 0) throw std::invalid_argument("insert: zero multiplicity");

    InsertOutcome out;
    NodeId cur = root();
    for (ItemId item : items) {
        NodeId next = find_child(cur, item);
        if (next != kNoNode) {
            nodes_[next].count += multiplicity;
            ++count_updates_;
            ++out.counts_incremented;
        } else {
            next = static_cast<NodeId>(nodes_.size());
            WpsNode n;
            n.item = item;
            n.count = multiplicity;
            n.parent = cur;
            nodes_.push_back(std::move(n));
            auto& kids = nodes_[cur].children;
            auto pos = std::lower_bound(kids.begin(), kids.end(), item,
                                        [&](NodeId c, ItemId it) {
                                            return order.rank(nodes_[c].item) < order.rank(it);
                                        });
            kids.insert(pos, next);
            out.created_nodes.push_back(next);
        }
        cur = next;
    }
    return out;
}

NodeId WpsTree::graft(NodeId parent, ItemId item, std::uint32_t count) {
    NodeId id = static_cast<NodeId>(nodes_.size());
    WpsNode n;
    n.item = item;
    n.count = count;
    n.parent = parent;
    nodes_.push_back(std::move(n));
    nodes_[parent].children.push_back(id);
    return id;
}

std::map<std::vector<ItemId>, std::uint64_t> WpsTree::reconstruct() const {
    std::map<std::vector<ItemId>, std::uint64_t> out;
    std::vector<ItemId> path;
    // Iterative DFS; frame second member tracks the next child slot.
    std::vector<std::pair<NodeId, std::size_t>> stack{{root(), 0}};
    while (!stack.empty()) {
        auto& [id, next_child] = stack.back();
        const WpsNode& n = nodes_[id];
        if (next_child == 0 && id != root()) path.push_back(n.item);
        if (next_child < n.children.size()) {
            NodeId c = n.children[next_child++];
            stack.push_back({c, 0});
            continue;
        }
        if (id != root()) {
            std::uint64_t kids = 0;
            for (NodeId c : n.children) kids += nodes_[c].count;
            if (n.count > kids) {
                std::vector<ItemId> key = path;
                std::sort(key.begin(), key.end());
                out[key] += n.count - kids;
            }
            path.pop_back();
        }
        stack.pop_back();
    }
    return out;
}

std::uint32_t hash_bucket(std::string_view key, std::uint16_t n_buckets) {
    if (n_buckets == 0) throw ConfigError("hash_bucket: n_buckets must be positive");
    if (n_buckets == 26 && key.size() == 1 && std::isalpha(static_cast<unsigned char>(key[0])))
        return static_cast<std::uint32_t>(std::tolower(static_cast<unsigned char>(key[0])) - 'a');
    std::uint64_t h = 1469598103934665603ull; // FNV-1a
    for (unsigned char c : key) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return static_cast<std::uint32_t>(h % n_buckets);
}

WpsHashIndex::WpsHashIndex(std::uint16_t n_buckets) : n_buckets_(n_buckets) {
    if (n_buckets == 0) throw ConfigError("hash index needs at least one bucket");
    buckets_.resize(n_buckets);
}

void WpsHashIndex::add(ItemId item, std::string_view key, NodeId node) {
    buckets_[hash_bucket(key, n_buckets_)].push_back({item, node});
    ++entries_;
}

std::vector<std::pair<NodeId, std::uint32_t>> WpsHashIndex::lookup(ItemId item,
                                                                   std::string_view key,
                                                                   const WpsTree& tree) const {
    std::vector<std::pair<NodeId, std::uint32_t>> out;
    for (const HashEntry& e : buckets_[hash_bucket(key, n_buckets_)])
        if (e.item == item) out.emplace_back(e.node, tree.node(e.node).count);
    return out;
}

std::array<std::uint64_t, 3> LayerAssignment::node_histogram(const WpsTree& tree) const {
    std::array<std::uint64_t, 3> h{0, 0, 0};
    for (NodeId id = 1; id < tree.node_count(); ++id)
        ++h[static_cast<std::size_t>(of_node(tree.node(id)))];
    return h;
}

LayerAssignment assign_layers(const std::vector<std::uint32_t>& supports, std::uint32_t high,
                              std::uint32_t low) {
    if (low < 2) throw ConfigError("layer threshold low must be >= 2");
    if (high < low) throw ConfigError("layer threshold high must be >= low");
    LayerAssignment out;
    out.high = high;
    out.low = low;
    out.item_layer.resize(supports.size(), Layer::Weak);
    for (std::size_t i = 0; i < supports.size(); ++i) {
        if (supports[i] >= high)
            out.item_layer[i] = Layer::Excellent;
        else if (supports[i] >= low)
            out.item_layer[i] = Layer::Medium;
    }
    return out;
}

BuiltIndex build_index(const TransactionDb& db, const ItemOrder& order, const BuildConfig& cfg) {
    if (cfg.k_sup < 0.0 || cfg.k_sup > 1.0)
        throw ConfigError("k_sup must lie in [0, 1]");

    BuiltIndex out;
    out.hash = WpsHashIndex(cfg.n_buckets);
    out.order = order;
    out.supports = support_vector(db);

    std::optional<std::uint32_t> min_support;
    if (cfg.k_sup > 0.0) {
        out.build_min_support = static_cast<std::uint32_t>(
            std::ceil(cfg.k_sup * static_cast<double>(db.size()) - 1e-9));
        min_support = out.build_min_support;
    }

    for (const auto& tx : db.transactions) {
        std::vector<ItemId> proj = project_transaction(tx, order, min_support, out.supports);
        if (proj.empty()) continue;
        out.projected_item_insertions += proj.size();
        InsertOutcome o = out.tree.insert(proj, order);
        for (NodeId n : o.created_nodes)
            out.hash.add(out.tree.node(n).item, db.item_key(out.tree.node(n).item), n);
    }
    return out;
}

} // namespace wps
