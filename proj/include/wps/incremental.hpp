#ifndef WPS_INCREMENTAL_HPP
#define WPS_INCREMENTAL_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "wps/storage.hpp"

namespace wps {

/// New transactions to fold into an existing index. Tids must not collide
/// with the index's tid range; tid 0 requests auto-assignment.
struct DeltaBatch {
    std::vector<Transaction> transactions;
    std::string tag;
    /// Updated page catalog when the batch came from sessionized logs; empty
    /// means item keys are decimal tokens (or the existing catalog suffices).
    std::vector<std::string> catalog_pages;
};

struct UpdateReport {
    std::uint64_t transactions_appended = 0;
    std::uint64_t empty_dropped = 0;
    std::uint32_t nodes_created = 0;
    std::uint64_t counts_incremented = 0;
    std::vector<ItemId> new_items;
    /// Scans of the original transaction source performed by the append;
    /// always zero — the update works entirely off the index files.
    std::uint64_t source_scans_during_append = 0;
    TxId tid_min = 0;
    TxId tid_max = 0;
};

/// Appends a batch under the index's frozen item order (new items rank after
/// all existing ones, ordered by key among themselves), extends the hash
/// index and rewrites the block files. Never touches the original source.
/// Requires a ReadWrite handle and a k_sup = 0 build.
UpdateReport append_transactions(IndexHandle& handle, const DeltaBatch& batch);

/// Rebuilds the index from its own reconstructed transactions under a fresh
/// descending-support order. Restores truncating projections after appends.
void reorder_rebuild(IndexHandle& handle);

std::string update_report_json(const UpdateReport& report, const IndexHandle& handle);

} // namespace wps

#endif
