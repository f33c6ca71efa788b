#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "support/fixtures.hpp"
#include "wps/access.hpp"

using namespace wps;
using test::L;

namespace {

std::string path_str(const PrefixPath& p) {
    std::string s;
    for (const auto& [item, count] : p.entries) {
        if (!s.empty()) s += ' ';
        s += static_cast<char>('a' + item);
        s += ':';
        s += std::to_string(count);
    }
    return s;
}

std::map<std::string, std::uint64_t> rows_by_letters(const ProjectedDb& db) {
    std::map<std::string, std::uint64_t> out;
    for (const auto& row : db.rows) {
        std::string s;
        for (ItemId i : row.items) s.push_back(static_cast<char>('a' + i));
        std::sort(s.begin(), s.end());
        out[s] += row.multiplicity;
    }
    return out;
}

} // namespace

struct ExampleHandle {
    test::BuiltOnDisk disk;
    IndexHandle handle;

    ExampleHandle()
        : disk(test::build_to_disk(test::example_db(),
                                   [] {
                                       StorageConfig cfg;
                                       cfg.layer_high = 5;
                                       cfg.layer_low = 3;
                                       return cfg;
                                   }())),
          handle(open_index(disk.base)) {}
};

TEST_CASE("prefix paths of p match the known decomposition") {
    ExampleHandle t;
    auto paths = prefix_paths(t.handle, L('p'));
    REQUIRE(paths.size() == 2);

    std::set<std::string> got{path_str(paths[0]), path_str(paths[1])};
    CHECK(got == std::set<std::string>{"p:3 d:5 h:7 e:7 b:10", "p:2 h:3 e:3"});

    std::uint64_t anchor_total = 0;
    for (const auto& p : paths) anchor_total += p.anchor_support();
    CHECK(anchor_total == t.handle.support(L('p')));
    CHECK(anchor_total == 5);
}

TEST_CASE("normalize_path levels every count to the anchor support") {
    ExampleHandle t;
    auto paths = prefix_paths(t.handle, L('p'));
    REQUIRE(!paths.empty());
    const PrefixPath* first = nullptr;
    for (const auto& p : paths)
        if (p.anchor_support() == 3) first = &p;
    REQUIRE(first != nullptr);

    PrefixPath norm = normalize_path(*first);
    CHECK(path_str(norm) == "p:3 d:3 h:3 e:3 b:3");
    CHECK(path_str(normalize_path(norm)) == path_str(norm)); // idempotent
}

TEST_CASE("a root child yields a length-one path") {
    ExampleHandle t;
    auto paths = prefix_paths(t.handle, L('b'));
    REQUIRE(paths.size() == 1);
    CHECK(path_str(paths[0]) == "b:10");
    CHECK(path_str(normalize_path(paths[0])) == "b:10");
}

TEST_CASE("absent items have no prefix paths") {
    ExampleHandle t;
    CHECK(prefix_paths(t.handle, L('q')).empty());
}

TEST_CASE("prefix path counts never decrease toward the root") {
    ExampleHandle t;
    for (const auto& info : t.handle.items())
        for (const auto& p : prefix_paths(t.handle, info.id))
            for (std::size_t i = 1; i < p.entries.size(); ++i)
                CHECK(p.entries[i].second >= p.entries[i - 1].second);
}

TEST_CASE("support projection at 5 groups the transactions as expected") {
    ExampleHandle t;
    ProjectedDb db = support_projection(t.handle, 5);
    std::map<std::string, std::uint64_t> expected{
        {"bdehp", 3}, {"bdeh", 2}, {"abeh", 2}, {"ab", 3}, {"ehp", 2}, {"aeh", 1}};
    CHECK(rows_by_letters(db) == expected);
    CHECK(db.total() == 13);
}

TEST_CASE("support projection at 1 reconstructs the whole database") {
    ExampleHandle t;
    ProjectedDb db = support_projection(t.handle, 1);
    std::map<std::vector<ItemId>, std::uint64_t> got;
    for (const auto& row : db.rows) {
        std::vector<ItemId> key = row.items;
        std::sort(key.begin(), key.end());
        got[key] += row.multiplicity;
    }
    CHECK(got == test::canonical_multiset(test::example_db()));
}

TEST_CASE("support projection above the maximum support is empty") {
    ExampleHandle t;
    CHECK(support_projection(t.handle, 11).rows.empty());
    CHECK_THROWS_AS(support_projection(t.handle, 0), ConfigError);
}

TEST_CASE("support projection prunes below the first infrequent node") {
    Table1Handle t;
    t.handle.clear_cache();
    std::uint64_t before = t.handle.io().nodes_read;
    support_projection(t.handle, 10);
    std::uint64_t used = t.handle.io().nodes_read - before;
    // Frequent spine (root, b, e, h, e', h') plus one boundary node per
    // infrequent child (d, a, a', p', a''); everything deeper stays unread.
    CHECK(used == 11);
    CHECK(used < t.handle.n_node_records());
}

TEST_CASE("item projection returns every transaction containing the item") {
    ExampleHandle t;
    ProjectedDb a = item_projection(t.handle, L('a'));
    std::map<std::string, std::uint64_t> expected{{"aehjkw", 1}, {"abinrsu", 1},
                                                  {"abi", 1},    {"abehrt", 1},
                                                  {"abehr", 1},  {"abinrz", 1}};
    CHECK(rows_by_letters(a) == expected);
    CHECK(a.total() == 6);

    ProjectedDb v = item_projection(t.handle, L('v'));
    CHECK(rows_by_letters(v) == std::map<std::string, std::uint64_t>{{"bdeghpv", 1}});

    CHECK(item_projection(t.handle, L('q')).rows.empty());
}

TEST_CASE("item projection cardinality equals the support, and rows contain the item") {
    ExampleHandle t;
    for (const auto& info : t.handle.items()) {
        ProjectedDb db = item_projection(t.handle, info.id);
        CHECK(db.total() == info.support);
        for (const auto& row : db.rows)
            CHECK(std::find(row.items.begin(), row.items.end(), info.id) !=
                  row.items.end());
    }
}

TEST_CASE("hash access reads each reachable node once and far fewer than a scan") {
    ExampleHandle t;
    std::uint64_t full = t.handle.n_node_records();
    for (const auto& info : t.handle.items()) {
        // Distinct anchor-path nodes, computed independently of the counter.
        std::set<NodeId> distinct;
        for (const auto& [anchor, count] : t.handle.occurrences(info.id)) {
            (void)count;
            NodeId cur = anchor;
            while (cur != t.handle.root()) {
                distinct.insert(cur);
                cur = t.handle.node(cur).parent;
            }
        }

        t.handle.clear_cache();
        std::uint64_t before = t.handle.io().nodes_read;
        auto paths = prefix_paths(t.handle, info.id);
        std::uint64_t used = t.handle.io().nodes_read - before;

        CHECK(used == distinct.size());
        CHECK(used <= paths.size() * 7); // occurrences x max depth
        CHECK(used < full);
    }
}

TEST_CASE("selective access never reads more nodes than a full scan") {
    // Two occurrences of one item below a shared prefix: the ancestor walk
    // must not pay for the prefix twice. All items tie at support 2, so the
    // numeric key order 0,1,2,3,9 is the tree order and 9 sits on two leaves.
    TransactionDb db;
    db.add_transaction({0, 1, 2, 9});
    db.add_transaction({0, 1, 3, 9});
    db.add_transaction({2});
    db.add_transaction({3});
    auto disk = test::build_to_disk(db);
    IndexHandle h = open_index(disk.base);

    std::uint64_t before = h.io().nodes_read;
    auto paths = prefix_paths(h, 9);
    std::uint64_t used = h.io().nodes_read - before;
    REQUIRE(paths.size() == 2);
    CHECK(used == 6); // 9a,2,1,0 plus 9b,3: the 1,0 prefix is read once
    CHECK(used <= h.n_node_records());
}

TEST_CASE("scan-based access agrees with hash-based access") {
    ExampleHandle t;
    for (const auto& info : t.handle.items()) {
        auto via_hash = prefix_paths(t.handle, info.id);
        auto via_scan = prefix_paths_by_scan(t.handle, info.id);
        auto key = [](const PrefixPath& p) { return path_str(p); };
        std::multiset<std::string> a, b;
        for (const auto& p : via_hash) a.insert(key(p));
        for (const auto& p : via_scan) b.insert(key(p));
        CHECK(a == b);
    }
}
