#ifndef WPS_TESTS_FIXTURES_HPP
#define WPS_TESTS_FIXTURES_HPP

#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <unistd.h>
#include <set>
#include <string>
#include <vector>

#include "wps/storage.hpp"
#include "wps/transactions.hpp"
#include "wps/tree.hpp"

namespace wps::test {

/// The 13-session example database over pages a..z (ids 0..25).
inline const std::vector<std::string>& example_rows() {
    static const std::vector<std::string> rows = {
        "bhepvdg", "mhndbe", "lfohecp", "awekhj", "dbehn", "arnuibs", "bghdep",
        "aib",     "feichp", "haebrt",  "rehba", "zianrb", "bdhpe"};
    return rows;
}

inline ItemId L(char c) { return static_cast<ItemId>(c - 'a'); }

/// Catalog-backed variant: item keys are the letters themselves.
inline TransactionDb example_db() {
    TransactionDb db;
    PageCatalog catalog;
    for (char c = 'a'; c <= 'z'; ++c) catalog.add(std::string(1, c));
    for (const std::string& row : example_rows()) {
        std::vector<ItemId> items;
        for (char c : row) items.push_back(L(c));
        db.add_transaction(std::move(items));
    }
    db.universe_items = catalog.size();
    db.catalog = std::move(catalog);
    db.source_scans = 1;
    return db;
}

inline void write_example_file(const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    for (const std::string& row : example_rows()) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ' ';
            out << static_cast<int>(L(row[i]));
        }
        out << '\n';
    }
}

/// Unique scratch directory, removed on destruction.
class TempDir {
public:
    TempDir() {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("wps_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        if (path_.empty()) return;
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    TempDir(TempDir&& other) noexcept : path_(std::move(other.path_)) {
        other.path_.clear();
    }
    TempDir& operator=(TempDir&& other) noexcept {
        std::swap(path_, other.path_);
        return *this;
    }

    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    std::filesystem::path path_;
};

/// Deterministic small random database for property tests.
inline TransactionDb random_db(std::uint64_t seed, std::size_t max_tx = 50,
                               std::uint32_t max_items = 15) {
    std::uint64_t state = seed * 0x9E3779B97F4A7C15ull + 1;
    auto next = [&]() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    };
    TransactionDb db;
    std::size_t n_tx = 1 + next() % max_tx;
    std::uint32_t n_items = 2 + static_cast<std::uint32_t>(next() % (max_items - 1));
    for (std::size_t t = 0; t < n_tx; ++t) {
        std::size_t len = 1 + next() % std::min<std::uint32_t>(8, n_items);
        std::set<ItemId> items;
        while (items.size() < len) items.insert(static_cast<ItemId>(next() % n_items));
        db.add_transaction({items.begin(), items.end()});
    }
    db.universe_items = std::max(db.universe_items, n_items);
    db.source_scans = 1;
    return db;
}

/// The database's transaction multiset in the same canonical form that
/// WpsTree::reconstruct produces (ascending-id items, grouped).
inline std::map<std::vector<ItemId>, std::uint64_t> canonical_multiset(
    const TransactionDb& db, std::uint32_t min_support = 0) {
    std::vector<std::uint32_t> supports = support_vector(db);
    std::map<std::vector<ItemId>, std::uint64_t> out;
    for (const auto& tx : db.transactions) {
        std::vector<ItemId> items;
        for (ItemId i : tx.items)
            if (min_support == 0 || supports[i] >= min_support) items.push_back(i);
        if (!items.empty()) ++out[items];
    }
    return out;
}

/// Reads the stored tree back through the handle and rebuilds the multiset it
/// represents; independent of WpsTree::reconstruct.
inline std::map<std::vector<ItemId>, std::uint64_t> reconstruct_stored(IndexHandle& handle) {
    std::map<std::vector<ItemId>, std::uint64_t> out;
    std::vector<ItemId> path;

    struct Walker {
        IndexHandle& h;
        std::map<std::vector<ItemId>, std::uint64_t>& out;
        std::vector<ItemId>& path;

        std::uint64_t visit(NodeId id) {
            StoredNode n = h.node(id);
            bool is_root = id == h.root();
            if (!is_root) path.push_back(n.item);
            std::uint64_t kid_sum = 0;
            NodeId c = n.first_child;
            while (c != kNoNode) {
                StoredNode cn = h.node(c);
                kid_sum += cn.count;
                visit(c);
                c = cn.next_sibling;
            }
            if (!is_root && n.count > kid_sum) {
                std::vector<ItemId> key = path;
                std::sort(key.begin(), key.end());
                out[key] += n.count - kid_sum;
            }
            if (!is_root) path.pop_back();
            return n.count;
        }
    };
    Walker{handle, out, path}.visit(handle.root());
    return out;
}

struct BuiltOnDisk {
    TempDir dir;
    std::string base;
};

inline BuiltOnDisk build_to_disk(const TransactionDb& db, StorageConfig cfg = {}) {
    BuiltOnDisk out;
    out.base = out.dir.file("index");
    build_and_write(db, cfg, out.base);
    return out;
}

} // namespace wps::test

#endif
