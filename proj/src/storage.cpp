#include "wps/storage.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <map>
#include <sstream>

#include <json.hpp>

namespace wps {

namespace {

constexpr char kTreeMagic[4] = {'W', 'P', 'S', 'M'};
constexpr char kHashMagic[4] = {'W', 'P', 'S', 'H'};
constexpr std::uint16_t kFormatVersion = 1;
constexpr std::size_t kTreeHeaderSize = 60;

void put_u16(std::vector<std::uint8_t>& b, std::uint16_t v) {
    b.push_back(static_cast<std::uint8_t>(v));
    b.push_back(static_cast<std::uint8_t>(v >> 8));
}
void put_u32(std::vector<std::uint8_t>& b, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) b.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}
void put_u64(std::vector<std::uint8_t>& b, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) b.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}
void put_f64(std::vector<std::uint8_t>& b, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    put_u64(b, bits);
}

std::uint16_t get_u16(const std::uint8_t* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}
std::uint32_t get_u32(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}
std::uint64_t get_u64(const std::uint8_t* p) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
    return v;
}
double get_f64(const std::uint8_t* p) {
    std::uint64_t bits = get_u64(p);
    double v;
    std::memcpy(&v, &bits, sizeof(v));
    return v;
}

std::vector<std::uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path);
    std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
    return data;
}

void write_file(const std::string& path, const std::vector<std::uint8_t>& data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write file: " + path);
    out.write(reinterpret_cast<const char*>(data.data()),
              static_cast<std::streamsize>(data.size()));
    if (!out) throw IoError("write failed: " + path);
}

void append_crc(std::vector<std::uint8_t>& data) {
    put_u32(data, crc32(data.data(), data.size()));
}

/// Strips the trailer after verifying it. Throws FormatError on mismatch.
void check_crc(std::vector<std::uint8_t>& data, const std::string& path) {
    if (data.size() < 4) throw FormatError("file truncated: " + path);
    std::uint32_t stored = get_u32(data.data() + data.size() - 4);
    data.resize(data.size() - 4);
    if (crc32(data.data(), data.size()) != stored)
        throw FormatError("checksum mismatch: " + path);
}

std::string tree_path(const std::string& base) { return base + ".wpst"; }
std::string hash_path(const std::string& base) { return base + ".wpsh"; }
std::string meta_path(const std::string& base) { return base + ".meta.json"; }

nlohmann::json meta_to_json(const IndexMeta& m) {
    nlohmann::json items = nlohmann::json::array();
    for (const auto& it : m.items)
        items.push_back({it.id, it.key, it.support, it.rank});
    return nlohmann::json{
        {"items", items},
        {"universe", m.universe},
        {"n_transactions", m.n_transactions},
        {"total_items", m.total_items},
        {"n_distinct_items", m.n_distinct_items},
        {"dataset_size_bytes", m.dataset_size_bytes},
        {"source_path", m.source_path},
        {"source_scans", m.source_scans},
        {"tid_max", m.tid_max},
        {"block_size", m.block_size},
        {"k_avg", m.k_avg},
        {"k_sup", m.k_sup},
        {"n_buckets", m.n_buckets},
        {"layer_high", m.layer_high},
        {"layer_low", m.layer_low},
        {"nodes_created", m.nodes_created},
        {"count_updates", m.count_updates},
        {"hash_entries", m.hash_entries},
        {"appended_batches", m.appended_batches},
        {"appended_transactions", m.appended_transactions},
        {"order_descending", m.order_descending},
        {"catalog_pages", m.catalog_pages},
        {"layer_histogram", m.layer_histogram},
        {"creation_time_seconds", m.creation_time_seconds},
    };
}

IndexMeta meta_from_json(const nlohmann::json& j) {
    IndexMeta m;
    for (const auto& it : j.at("items"))
        m.items.push_back({it.at(0).get<ItemId>(), it.at(1).get<std::string>(),
                           it.at(2).get<std::uint32_t>(), it.at(3).get<std::uint32_t>()});
    j.at("universe").get_to(m.universe);
    j.at("n_transactions").get_to(m.n_transactions);
    j.at("total_items").get_to(m.total_items);
    j.at("n_distinct_items").get_to(m.n_distinct_items);
    j.at("dataset_size_bytes").get_to(m.dataset_size_bytes);
    j.at("source_path").get_to(m.source_path);
    j.at("source_scans").get_to(m.source_scans);
    j.at("tid_max").get_to(m.tid_max);
    j.at("block_size").get_to(m.block_size);
    j.at("k_avg").get_to(m.k_avg);
    j.at("k_sup").get_to(m.k_sup);
    j.at("n_buckets").get_to(m.n_buckets);
    j.at("layer_high").get_to(m.layer_high);
    j.at("layer_low").get_to(m.layer_low);
    j.at("nodes_created").get_to(m.nodes_created);
    j.at("count_updates").get_to(m.count_updates);
    j.at("hash_entries").get_to(m.hash_entries);
    j.at("appended_batches").get_to(m.appended_batches);
    j.at("appended_transactions").get_to(m.appended_transactions);
    j.at("order_descending").get_to(m.order_descending);
    j.at("catalog_pages").get_to(m.catalog_pages);
    j.at("layer_histogram").get_to(m.layer_histogram);
    j.at("creation_time_seconds").get_to(m.creation_time_seconds);
    return m;
}

} // namespace

std::uint32_t crc32(const std::uint8_t* data, std::size_t len, std::uint32_t seed) {
    static const auto table = [] {
        std::array<std::uint32_t, 256> t{};
        for (std::uint32_t i = 0; i < 256; ++i) {
            std::uint32_t c = i;
            for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
            t[i] = c;
        }
        return t;
    }();
    std::uint32_t c = seed ^ 0xFFFFFFFFu;
    for (std::size_t i = 0; i < len; ++i) c = table[(c ^ data[i]) & 0xFF] ^ (c >> 8);
    return c ^ 0xFFFFFFFFu;
}

BlockAssignment cluster_paths(const WpsTree& tree, const LayerAssignment& layers,
                              const ItemOrder& order, const StorageConfig& cfg) {
    const std::uint32_t npb = cfg.block_size / kNodeRecordSize;
    if (npb == 0)
        throw ConfigError("block_size " + std::to_string(cfg.block_size) +
                          " cannot hold one node record");
    if (cfg.k_avg < 0.0) throw ConfigError("k_avg must be >= 0");

    const std::size_t n = tree.node_count();

    // Subtree count sums and sizes; children always have larger ids than
    // their parent, so one reverse sweep suffices.
    std::vector<double> sum(n, 0.0);
    std::vector<std::uint64_t> size(n, 1);
    for (std::size_t id = n; id-- > 1;) {
        sum[id] += tree.node(static_cast<NodeId>(id)).count;
        NodeId p = tree.node(static_cast<NodeId>(id)).parent;
        sum[p] += sum[id];
        size[p] += size[id];
    }
    auto density = [&](NodeId id) { return sum[id] / static_cast<double>(size[id]); };

    // A child whose subtree is more than k_avg times less dense than its
    // parent's starts a new correlation cluster.
    auto splits = [&](NodeId parent, NodeId child) {
        return density(parent) > cfg.k_avg * density(child);
    };

    std::vector<std::vector<NodeId>> clusters;
    std::vector<NodeId> cluster_branch_parent; // tree parent of the cluster top
    std::vector<std::uint32_t> cluster_of(n, 0);

    auto ordered_children = [&](NodeId id) {
        std::vector<NodeId> kids = tree.node(id).children;
        std::sort(kids.begin(), kids.end(), [&](NodeId a, NodeId b) {
            Layer la = layers.of_item(tree.node(a).item);
            Layer lb = layers.of_item(tree.node(b).item);
            if (la != lb) return la < lb;
            return order.rank(tree.node(a).item) < order.rank(tree.node(b).item);
        });
        return kids;
    };

    // DFS in (layer, rank) child order; clusters are recorded in first
    // encounter order and their node lists in visit order.
    std::vector<NodeId> stack{tree.root()};
    clusters.emplace_back();
    cluster_branch_parent.push_back(kNoNode);
    while (!stack.empty()) {
        NodeId id = stack.back();
        stack.pop_back();
        if (id == tree.root()) {
            cluster_of[id] = 0;
        } else {
            NodeId p = tree.node(id).parent;
            if (splits(p, id)) {
                cluster_of[id] = static_cast<std::uint32_t>(clusters.size());
                clusters.emplace_back();
                cluster_branch_parent.push_back(p);
            } else {
                cluster_of[id] = cluster_of[p];
            }
        }
        clusters[cluster_of[id]].push_back(id);
        auto kids = ordered_children(id);
        for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
    }

    BlockAssignment out;
    out.nodes_per_block = npb;
    out.block_of.assign(n, 0);
    out.slot_of.assign(n, 0);

    std::vector<std::uint32_t> free_slots;
    auto new_block = [&] {
        out.block_nodes.emplace_back();
        free_slots.push_back(npb);
        return static_cast<std::uint32_t>(out.block_nodes.size() - 1);
    };
    auto place = [&](NodeId id, std::uint32_t b) {
        out.block_of[id] = b;
        out.slot_of[id] = npb - free_slots[b];
        out.block_nodes[b].push_back(id);
        --free_slots[b];
    };

    for (std::size_t c = 0; c < clusters.size(); ++c) {
        const auto& nodes = clusters[c];
        NodeId bp = cluster_branch_parent[c];
        if (bp != kNoNode) {
            std::uint32_t pb = out.block_of[bp];
            if (free_slots[pb] >= nodes.size()) {
                for (NodeId id : nodes) place(id, pb);
                continue;
            }
        }
        // Fresh blocks; a cluster never straddles when it fits in one.
        std::size_t placed = 0;
        while (placed < nodes.size()) {
            std::uint32_t b = new_block();
            std::size_t take = std::min<std::size_t>(npb, nodes.size() - placed);
            for (std::size_t i = 0; i < take; ++i) place(nodes[placed + i], b);
            placed += take;
        }
    }

    out.n_blocks = static_cast<std::uint32_t>(out.block_nodes.size());
    return out;
}

void write_index(const BuiltIndex& built, const LayerAssignment& layers,
                 const BlockAssignment& assignment, const IndexMeta& meta,
                 const std::string& base, IoStats* io) {
    const WpsTree& tree = built.tree;
    const std::uint32_t npb = assignment.nodes_per_block;
    if (assignment.block_of.size() != tree.node_count())
        throw Error("write_index: assignment does not cover the tree");
    if (assignment.block_of[tree.root()] != 0 || assignment.slot_of[tree.root()] != 0)
        throw Error("write_index: root must sit in block 0, slot 0");

    auto phys = [&](NodeId id) {
        return id == kNoNode ? kNoNode : assignment.block_of[id] * npb + assignment.slot_of[id];
    };

    // --- tree file ---
    std::vector<std::uint8_t> tf;
    tf.reserve(kTreeHeaderSize +
               static_cast<std::size_t>(assignment.n_blocks) * meta.block_size + 4);
    tf.insert(tf.end(), kTreeMagic, kTreeMagic + 4);
    put_u16(tf, kFormatVersion);
    put_u16(tf, meta.n_buckets);
    put_u32(tf, meta.block_size);
    put_u64(tf, tree.node_count());
    put_f64(tf, meta.k_avg);
    put_f64(tf, meta.k_sup);
    put_u32(tf, meta.layer_high);
    put_u32(tf, meta.layer_low);
    put_u64(tf, assignment.n_blocks);
    put_u32(tf, npb);
    put_u32(tf, 0); // reserved

    for (std::uint32_t b = 0; b < assignment.n_blocks; ++b) {
        std::vector<std::uint8_t> block(meta.block_size, 0);
        for (NodeId id : assignment.block_nodes[b]) {
            const WpsNode& n = tree.node(id);
            std::vector<std::uint8_t> rec;
            rec.reserve(kNodeRecordSize);
            put_u32(rec, n.item);
            put_u32(rec, n.count);
            put_u32(rec, phys(n.parent));
            put_u32(rec, n.children.empty() ? kNoNode : phys(n.children.front()));
            // Sibling link: position within the parent's child list.
            NodeId sibling = kNoNode;
            if (n.parent != kNoNode) {
                const auto& kids = tree.node(n.parent).children;
                auto it = std::find(kids.begin(), kids.end(), id);
                if (it != kids.end() && it + 1 != kids.end()) sibling = *(it + 1);
            }
            put_u32(rec, phys(sibling));
            std::copy(rec.begin(), rec.end(),
                      block.begin() + static_cast<std::size_t>(assignment.slot_of[id]) *
                                          kNodeRecordSize);
        }
        tf.insert(tf.end(), block.begin(), block.end());
    }
    append_crc(tf);
    write_file(tree_path(base), tf);
    if (io) io->blocks_written += assignment.n_blocks;

    // --- hash file: per bucket, entries grouped per item in chain order ---
    std::vector<std::uint8_t> hf;
    hf.insert(hf.end(), kHashMagic, kHashMagic + 4);
    put_u16(hf, kFormatVersion);
    put_u16(hf, built.hash.bucket_count());
    put_u64(hf, built.hash.entry_count());

    std::vector<std::vector<std::tuple<ItemId, NodeId, std::uint32_t>>> grouped(
        built.hash.bucket_count());
    for (std::uint16_t b = 0; b < built.hash.bucket_count(); ++b) {
        std::vector<ItemId> item_order;
        std::map<ItemId, std::vector<HashEntry>> per_item;
        for (const HashEntry& e : built.hash.buckets()[b]) {
            if (per_item.find(e.item) == per_item.end()) item_order.push_back(e.item);
            per_item[e.item].push_back(e);
        }
        for (ItemId it : item_order)
            for (const HashEntry& e : per_item[it])
                grouped[b].emplace_back(e.item, phys(e.node), tree.node(e.node).count);
    }
    std::uint64_t offset = 0;
    for (const auto& bucket : grouped) {
        put_u64(hf, offset);
        put_u64(hf, bucket.size());
        offset += bucket.size();
    }
    for (const auto& bucket : grouped)
        for (const auto& [item, node, count] : bucket) {
            put_u32(hf, item);
            put_u32(hf, node);
            put_u32(hf, count);
        }
    append_crc(hf);
    write_file(hash_path(base), hf);

    // --- metadata ---
    IndexMeta m = meta;
    m.nodes_created = tree.node_count() - 1;
    m.count_updates = tree.count_updates();
    m.hash_entries = built.hash.entry_count();
    m.layer_histogram = layers.node_histogram(tree);
    std::string text = meta_to_json(m).dump(2);
    std::ofstream out(meta_path(base), std::ios::trunc);
    if (!out) throw IoError("cannot write file: " + meta_path(base));
    out << text << '\n';
    if (!out) throw IoError("write failed: " + meta_path(base));
}

void IndexHandle::load_files() {
    // Metadata first: cheap and catches mismatched paths early.
    std::ifstream meta_in(meta_path(base_));
    if (!meta_in) throw IoError("cannot open index metadata: " + meta_path(base_));
    nlohmann::json j;
    try {
        meta_in >> j;
        meta_ = meta_from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("bad index metadata " + meta_path(base_) + ": " + e.what());
    }

    item_index_.clear();
    for (std::size_t i = 0; i < meta_.items.size(); ++i)
        item_index_[meta_.items[i].id] = i;

    // Tree file: verify checksum and header once, then read blocks lazily.
    {
        std::vector<std::uint8_t> tf = read_file(tree_path(base_));
        check_crc(tf, tree_path(base_));
        if (tf.size() < kTreeHeaderSize || std::memcmp(tf.data(), kTreeMagic, 4) != 0)
            throw FormatError("not an index tree file: " + tree_path(base_));
        std::uint16_t version = get_u16(tf.data() + 4);
        if (version != kFormatVersion)
            throw FormatError("unsupported format version " + std::to_string(version) +
                              " in " + tree_path(base_));
        std::uint16_t n_buckets = get_u16(tf.data() + 6);
        std::uint32_t block_size = get_u32(tf.data() + 8);
        n_nodes_ = get_u64(tf.data() + 12);
        double k_avg = get_f64(tf.data() + 20);
        double k_sup = get_f64(tf.data() + 28);
        n_blocks_ = static_cast<std::uint32_t>(get_u64(tf.data() + 44));
        nodes_per_block_ = get_u32(tf.data() + 52);
        if (n_buckets != meta_.n_buckets || block_size != meta_.block_size ||
            k_avg != meta_.k_avg || k_sup != meta_.k_sup)
            throw FormatError("metadata does not match tree header: " + base_);
        if (nodes_per_block_ == 0 ||
            tf.size() != kTreeHeaderSize + static_cast<std::size_t>(n_blocks_) * block_size)
            throw FormatError("tree file size mismatch: " + tree_path(base_));
    }

    // Hash file is loaded whole.
    {
        std::vector<std::uint8_t> hf = read_file(hash_path(base_));
        check_crc(hf, hash_path(base_));
        if (hf.size() < 16 || std::memcmp(hf.data(), kHashMagic, 4) != 0)
            throw FormatError("not an index hash file: " + hash_path(base_));
        if (get_u16(hf.data() + 4) != kFormatVersion)
            throw FormatError("unsupported format version in " + hash_path(base_));
        std::uint16_t n_buckets = get_u16(hf.data() + 6);
        std::uint64_t n_entries = get_u64(hf.data() + 8);
        std::size_t dir_end = 16 + static_cast<std::size_t>(n_buckets) * 16;
        if (hf.size() != dir_end + n_entries * 12)
            throw FormatError("hash file size mismatch: " + hash_path(base_));
        hash_buckets_.assign(n_buckets, {});
        for (std::uint16_t b = 0; b < n_buckets; ++b) {
            std::uint64_t off = get_u64(hf.data() + 16 + b * 16);
            std::uint64_t cnt = get_u64(hf.data() + 16 + b * 16 + 8);
            if (off + cnt > n_entries)
                throw FormatError("hash directory out of range: " + hash_path(base_));
            hash_buckets_[b].reserve(cnt);
            for (std::uint64_t e = 0; e < cnt; ++e) {
                const std::uint8_t* p = hf.data() + dir_end + (off + e) * 12;
                hash_buckets_[b].emplace_back(get_u32(p), get_u32(p + 4), get_u32(p + 8));
            }
        }
    }

    file_ = std::make_unique<std::ifstream>(tree_path(base_), std::ios::binary);
    if (!*file_) throw IoError("cannot open index tree file: " + tree_path(base_));
    cache_.clear();
    lru_.clear();
}

const std::vector<std::uint8_t>& IndexHandle::block(std::uint32_t b) {
    auto it = cache_.find(b);
    if (it != cache_.end()) {
        if (cache_capacity_ > 0) {
            lru_.remove(b);
            lru_.push_back(b);
        }
        return it->second;
    }
    if (b >= n_blocks_) throw Error("block out of range: " + std::to_string(b));
    std::vector<std::uint8_t> data(meta_.block_size);
    file_->clear();
    file_->seekg(static_cast<std::streamoff>(kTreeHeaderSize) +
                 static_cast<std::streamoff>(b) * meta_.block_size);
    file_->read(reinterpret_cast<char*>(data.data()), meta_.block_size);
    if (file_->gcount() != static_cast<std::streamsize>(meta_.block_size))
        throw IoError("short block read in " + tree_path(base_));
    ++io_.blocks_read;
    if (cache_capacity_ > 0 && cache_.size() >= cache_capacity_) {
        cache_.erase(lru_.front());
        lru_.pop_front();
    }
    if (cache_capacity_ > 0) lru_.push_back(b);
    return cache_.emplace(b, std::move(data)).first->second;
}

StoredNode IndexHandle::node(NodeId id) {
    std::uint32_t b = id / nodes_per_block_;
    std::uint32_t slot = id % nodes_per_block_;
    const auto& data = block(b);
    const std::uint8_t* p = data.data() + static_cast<std::size_t>(slot) * kNodeRecordSize;
    ++io_.nodes_read;
    StoredNode n;
    n.item = get_u32(p);
    n.count = get_u32(p + 4);
    n.parent = get_u32(p + 8);
    n.first_child = get_u32(p + 12);
    n.next_sibling = get_u32(p + 16);
    return n;
}

std::vector<std::pair<NodeId, std::uint32_t>> IndexHandle::occurrences(ItemId item) const {
    std::vector<std::pair<NodeId, std::uint32_t>> out;
    auto it = item_index_.find(item);
    if (it == item_index_.end()) return out;
    std::uint32_t b = hash_bucket(meta_.items[it->second].key, meta_.n_buckets);
    for (const auto& [eitem, node, count] : hash_buckets_[b])
        if (eitem == item) out.emplace_back(node, count);
    return out;
}

std::optional<ItemId> IndexHandle::item_by_key(std::string_view key) const {
    for (const auto& it : meta_.items)
        if (it.key == key) return it.id;
    return std::nullopt;
}

std::uint32_t IndexHandle::support(ItemId id) const {
    auto it = item_index_.find(id);
    return it == item_index_.end() ? 0 : meta_.items[it->second].support;
}

std::uint32_t IndexHandle::rank(ItemId id) const {
    auto it = item_index_.find(id);
    return it == item_index_.end() ? kNoRank : meta_.items[it->second].rank;
}

std::string IndexHandle::item_key(ItemId id) const {
    auto it = item_index_.find(id);
    return it == item_index_.end() ? std::to_string(id) : meta_.items[it->second].key;
}

bool IndexHandle::has_item(ItemId id) const {
    return item_index_.find(id) != item_index_.end();
}

void IndexHandle::clear_cache() {
    cache_.clear();
    lru_.clear();
}

void IndexHandle::reload() { load_files(); }

IndexHandle open_index(const std::string& base, OpenMode mode, std::size_t cache_capacity) {
    IndexHandle h;
    h.base_ = base;
    h.mode_ = mode;
    h.cache_capacity_ = cache_capacity;
    h.load_files();
    return h;
}

StoredNode read_node(IndexHandle& handle, NodeId id) { return handle.node(id); }

IndexStatsReport index_stats(const IndexHandle& handle) {
    const IndexMeta& m = handle.meta();
    IndexStatsReport r;
    r.dataset = std::filesystem::path(handle.base_path()).filename().string();
    r.n_transactions = m.n_transactions;
    r.n_items = m.universe;
    r.avg_tr_size = m.n_transactions == 0
                        ? 0.0
                        : static_cast<double>(m.total_items) /
                              static_cast<double>(m.n_transactions);
    r.size_kb = static_cast<double>(m.dataset_size_bytes) / 1024.0;
    r.tree_records = m.nodes_created;
    r.hash_records = m.hash_entries;
    r.time_sec = m.creation_time_seconds;
    return r;
}

std::string stats_csv_header() {
    return "Dataset,Transactions,Items,AvgTrSz,Size(KB),WPs-Tree(Records),"
           "WPs-Hash(Records),Time(sec)";
}

std::string stats_to_csv(const IndexStatsReport& r) {
    std::ostringstream os;
    os << r.dataset << ',' << r.n_transactions << ',' << r.n_items << ',' << r.avg_tr_size
       << ',' << r.size_kb << ',' << r.tree_records << ',' << r.hash_records << ','
       << r.time_sec;
    return os.str();
}

std::string stats_to_json(const IndexStatsReport& r) {
    nlohmann::json j{{"dataset", r.dataset},
                     {"transactions", r.n_transactions},
                     {"items", r.n_items},
                     {"avg_tr_size", r.avg_tr_size},
                     {"size_kb", r.size_kb},
                     {"tree_records", r.tree_records},
                     {"hash_records", r.hash_records},
                     {"time_sec", r.time_sec}};
    return j.dump(2);
}

BuildOutputs build_and_write(const TransactionDb& db, const StorageConfig& cfg,
                             const std::string& base) {
    auto t0 = std::chrono::steady_clock::now();

    ItemOrder order = order_items(db);
    BuildConfig bc;
    bc.k_sup = cfg.k_sup;
    bc.n_buckets = cfg.n_buckets;
    BuiltIndex built = build_index(db, order, bc);

    LayerAssignment layers = assign_layers(built.supports, cfg.layer_high, cfg.layer_low);
    BlockAssignment assignment = cluster_paths(built.tree, layers, order, cfg);

    IndexMeta meta;
    for (ItemId i = 0; i < db.universe_items; ++i) {
        std::uint32_t r = order.rank(i);
        if (r == kNoRank || built.supports[i] == 0) continue;
        if (built.build_min_support > 0 && built.supports[i] < built.build_min_support)
            continue;
        meta.items.push_back({i, db.item_key(i), built.supports[i], r});
    }
    meta.universe = db.universe_items;
    meta.n_transactions = db.size();
    meta.total_items = db.total_items();
    meta.n_distinct_items = db.distinct_items();
    meta.dataset_size_bytes = db.source_bytes;
    meta.source_path = db.source_path;
    meta.source_scans = db.source_scans;
    meta.tid_max = db.transactions.empty() ? 0 : db.transactions.back().tid;
    meta.block_size = cfg.block_size;
    meta.k_avg = cfg.k_avg;
    meta.k_sup = cfg.k_sup;
    meta.n_buckets = cfg.n_buckets;
    meta.layer_high = cfg.layer_high;
    meta.layer_low = cfg.layer_low;
    meta.order_descending = true;
    if (db.catalog)
        for (ItemId i = 0; i < db.catalog->size(); ++i)
            meta.catalog_pages.push_back(db.catalog->page(i));

    BuildOutputs out;
    out.io.source_scans = db.source_scans;
    meta.creation_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_index(built, layers, assignment, meta, base, &out.io);

    IndexHandle h = open_index(base);
    out.stats = index_stats(h);
    return out;
}

} // namespace wps
