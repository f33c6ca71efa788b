#ifndef WPS_ACCESS_HPP
#define WPS_ACCESS_HPP

#include <cstdint>
#include <vector>

#include "wps/storage.hpp"

namespace wps {

/// Item/count pairs from an occurrence node up to (excluding) the root.
/// entries.front() is the anchor.
struct PrefixPath {
    std::vector<std::pair<ItemId, std::uint32_t>> entries;

    std::uint32_t anchor_support() const {
        return entries.empty() ? 0 : entries.front().second;
    }
};

/// A projected transaction set: rank-sorted item lists with multiplicities.
/// Identical lists are merged.
struct ProjectedTx {
    std::vector<ItemId> items;
    std::uint64_t multiplicity = 1;
};

struct ProjectedDb {
    std::vector<ProjectedTx> rows;

    std::uint64_t total() const {
        std::uint64_t n = 0;
        for (const auto& r : rows) n += r.multiplicity;
        return n;
    }
};

/// One path per occurrence of the item, raw counts, ancestor blocks only.
std::vector<PrefixPath> prefix_paths(IndexHandle& handle, ItemId item);

/// Replaces every count by the anchor's support.
PrefixPath normalize_path(PrefixPath path);

/// All transactions intersected with the items whose support reaches
/// min_support, read depth-first off the tree. While the stored rank order is
/// support-descending the visit stops at the first infrequent node; after
/// frozen-order appends it filters instead, which yields the same rows.
ProjectedDb support_projection(IndexHandle& handle, std::uint32_t min_support);

/// Every original transaction containing the item: upward path combined with
/// the residual expansion of each occurrence subtree.
ProjectedDb item_projection(IndexHandle& handle, ItemId item);

/// Baseline that finds the item's occurrences by walking the whole tree
/// depth-first instead of going through the hash index. Returns the same
/// paths as prefix_paths; used for I/O comparisons.
std::vector<PrefixPath> prefix_paths_by_scan(IndexHandle& handle, ItemId item);

} // namespace wps

#endif
