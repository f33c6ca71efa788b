#include "wps/access.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <unordered_map>

namespace wps {

namespace {

ProjectedDb merge_rows(std::map<std::vector<ItemId>, std::uint64_t> rows) {
    ProjectedDb out;
    out.rows.reserve(rows.size());
    for (auto& [items, mult] : rows) out.rows.push_back({items, mult});
    return out;
}

void for_each_child(IndexHandle& handle, const StoredNode& n,
                    const std::function<void(NodeId, const StoredNode&)>& fn) {
    NodeId c = n.first_child;
    while (c != kNoNode) {
        StoredNode cn = handle.node(c);
        fn(c, cn);
        c = cn.next_sibling;
    }
}

} // namespace

std::vector<PrefixPath> prefix_paths(IndexHandle& handle, ItemId item) {
    std::vector<PrefixPath> out;
    // Occurrence paths can share ancestors; read each node once per query so
    // selective access never costs more than a full scan.
    std::unordered_map<NodeId, StoredNode> seen;
    auto read = [&](NodeId id) -> const StoredNode& {
        auto it = seen.find(id);
        if (it == seen.end()) it = seen.emplace(id, handle.node(id)).first;
        return it->second;
    };
    for (const auto& [anchor, count] : handle.occurrences(item)) {
        (void)count;
        PrefixPath path;
        NodeId cur = anchor;
        while (cur != handle.root()) {
            const StoredNode& n = read(cur);
            path.entries.emplace_back(n.item, n.count);
            cur = n.parent;
        }
        out.push_back(std::move(path));
    }
    return out;
}

PrefixPath normalize_path(PrefixPath path) {
    std::uint32_t anchor = path.anchor_support();
    for (auto& [item, count] : path.entries) count = anchor;
    return path;
}

ProjectedDb support_projection(IndexHandle& handle, std::uint32_t min_support) {
    if (min_support < 1) throw ConfigError("min_support must be >= 1");

    std::map<std::vector<ItemId>, std::uint64_t> rows;
    std::vector<ItemId> path;
    auto frequent = [&](ItemId item) { return handle.support(item) >= min_support; };

    if (handle.order_descending()) {
        // Descending-support order: infrequent items only appear below
        // frequent ones, so the visit ends at the first infrequent node.
        // Returns the node's count when visited, 0 when pruned.
        std::function<std::uint64_t(const StoredNode&)> visit =
            [&](const StoredNode& n) -> std::uint64_t {
            if (!frequent(n.item)) return 0;
            path.push_back(n.item);
            std::uint64_t frequent_kids = 0;
            for_each_child(handle, n, [&](NodeId, const StoredNode& cn) {
                frequent_kids += visit(cn);
            });
            if (n.count > frequent_kids) rows[path] += n.count - frequent_kids;
            path.pop_back();
            return n.count;
        };
        StoredNode root = handle.node(handle.root());
        for_each_child(handle, root,
                       [&](NodeId, const StoredNode& cn) { visit(cn); });
    } else {
        // Frozen order after appends: infrequent items may sit above frequent
        // ones, so filter along the way instead of truncating. Rows are
        // emitted at end nodes (count above the sum of all children).
        std::function<void(const StoredNode&)> visit = [&](const StoredNode& n) {
            bool keep = frequent(n.item);
            if (keep) path.push_back(n.item);
            std::uint64_t all_kids = 0;
            for_each_child(handle, n, [&](NodeId, const StoredNode& cn) {
                all_kids += cn.count;
                visit(cn);
            });
            if (n.count > all_kids && !path.empty()) rows[path] += n.count - all_kids;
            if (keep) path.pop_back();
        };
        StoredNode root = handle.node(handle.root());
        for_each_child(handle, root,
                       [&](NodeId, const StoredNode& cn) { visit(cn); });
    }
    return merge_rows(std::move(rows));
}

ProjectedDb item_projection(IndexHandle& handle, ItemId item) {
    std::map<std::vector<ItemId>, std::uint64_t> rows;

    for (const auto& [anchor, anchor_count] : handle.occurrences(item)) {
        (void)anchor_count;
        StoredNode anchor_node = handle.node(anchor);

        // Upward: items from the root down to (excluding) the anchor.
        std::vector<ItemId> prefix;
        NodeId up = anchor_node.parent;
        while (up != handle.root()) {
            StoredNode n = handle.node(up);
            prefix.push_back(n.item);
            up = n.parent;
        }
        std::reverse(prefix.begin(), prefix.end());

        // Downward: each descendant with a residual count ends that many
        // transactions; their projection is the full root path to it.
        std::vector<ItemId> path = prefix;
        std::function<void(const StoredNode&)> expand = [&](const StoredNode& n) {
            path.push_back(n.item);
            std::uint64_t kid_counts = 0;
            for_each_child(handle, n, [&](NodeId, const StoredNode& cn) {
                kid_counts += cn.count;
                expand(cn);
            });
            if (n.count > kid_counts) rows[path] += n.count - kid_counts;
            path.pop_back();
        };
        expand(anchor_node);
    }
    return merge_rows(std::move(rows));
}

std::vector<PrefixPath> prefix_paths_by_scan(IndexHandle& handle, ItemId item) {
    std::vector<PrefixPath> out;
    std::vector<std::pair<ItemId, std::uint32_t>> path; // root -> current

    std::function<void(const StoredNode&)> visit = [&](const StoredNode& n) {
        path.emplace_back(n.item, n.count);
        if (n.item == item) {
            PrefixPath p;
            p.entries.assign(path.rbegin(), path.rend());
            out.push_back(std::move(p));
        }
        for_each_child(handle, n, [&](NodeId, const StoredNode& cn) { visit(cn); });
        path.pop_back();
    };

    StoredNode root = handle.node(handle.root());
    for_each_child(handle, root, [&](NodeId, const StoredNode& cn) { visit(cn); });
    return out;
}

} // namespace wps
