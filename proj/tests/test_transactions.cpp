#include <doctest.h>

#include <algorithm>

#include "support/fixtures.hpp"
#include "wps/transactions.hpp"

using namespace wps;
using test::L;

TEST_CASE("count_supports matches hand counts on the example dataset") {
    TransactionDb db = test::example_db();
    auto stats = count_supports(db);
    auto support = [&](char c) {
        for (const auto& s : stats)
            if (s.item == L(c)) return s.support;
        return 0u;
    };
    CHECK(support('b') == 10);
    CHECK(support('e') == 10);
    CHECK(support('h') == 10);
    CHECK(support('d') == 5);
    CHECK(support('p') == 5);
    CHECK(support('a') == 6);
    CHECK(support('i') == 4);
    CHECK(stats.size() == 23);
}

TEST_CASE("count_supports on an empty database is empty") {
    TransactionDb db;
    CHECK(count_supports(db).empty());
}

TEST_CASE("sum of supports equals the total item count") {
    TransactionDb db = test::example_db();
    std::uint64_t sum = 0;
    for (const auto& s : count_supports(db)) sum += s.support;
    CHECK(sum == db.total_items());
    CHECK(sum == 75);

    for (std::uint64_t seed : {5u, 6u, 7u}) {
        TransactionDb r = test::random_db(seed);
        std::uint64_t rs = 0;
        for (const auto& s : count_supports(r)) rs += s.support;
        CHECK(rs == r.total_items());
    }
}

TEST_CASE("order_items sorts by descending support with lexicographic ties") {
    TransactionDb db = test::example_db();
    ItemOrder order = order_items(db);

    // Ties at support 10 resolve to b, e, h; then a(6), d(5), p(5), i/n/r(4).
    std::vector<ItemId> head(order.by_rank.begin(), order.by_rank.begin() + 9);
    CHECK(head == std::vector<ItemId>{L('b'), L('e'), L('h'), L('a'), L('d'), L('p'),
                                      L('i'), L('n'), L('r')});

    // rank is a bijection over present items.
    std::vector<bool> seen(order.size(), false);
    for (ItemId i : order.by_rank) {
        REQUIRE(order.rank(i) < order.size());
        CHECK(!seen[order.rank(i)]);
        seen[order.rank(i)] = true;
    }
}

TEST_CASE("order_items is deterministic") {
    TransactionDb db = test::example_db();
    ItemOrder a = order_items(db);
    ItemOrder b = order_items(db);
    CHECK(a.by_rank == b.by_rank);
}

TEST_CASE("integer item keys break ties numerically") {
    // Items 2 and 10 with equal support: decimal tokens compare by value.
    TransactionDb db;
    db.add_transaction({2, 10});
    ItemOrder order = order_items(db);
    CHECK(order.by_rank == std::vector<ItemId>{2, 10});

    CHECK(natural_less("3", "15"));
    CHECK(!natural_less("15", "3"));
    CHECK(natural_less("/a", "/b"));
}

TEST_CASE("rank order respects the support/key invariant on random databases") {
    for (std::uint64_t seed : {30u, 31u, 32u, 33u}) {
        TransactionDb db = test::random_db(seed);
        ItemOrder order = order_items(db);
        auto supports = support_vector(db);
        for (std::size_t r = 1; r < order.by_rank.size(); ++r) {
            ItemId a = order.by_rank[r - 1];
            ItemId b = order.by_rank[r];
            bool by_support = supports[a] > supports[b];
            bool by_key = supports[a] == supports[b] &&
                          natural_less(db.item_key(a), db.item_key(b));
            CHECK((by_support || by_key));
        }
    }
}

TEST_CASE("single item gets rank 0") {
    TransactionDb db;
    db.add_transaction({4});
    ItemOrder order = order_items(db);
    CHECK(order.rank(4) == 0);
}

TEST_CASE("project_transaction sorts by rank and filters by support") {
    TransactionDb db = test::example_db();
    ItemOrder order = order_items(db);
    auto supports = support_vector(db);
    const Transaction& tx1 = db.transactions[0]; // {b,h,e,p,v,d,g}

    auto to_letters = [&](const std::vector<ItemId>& ids) {
        std::string s;
        for (ItemId i : ids) s.push_back(static_cast<char>('a' + i));
        return s;
    };

    CHECK(to_letters(project_transaction(tx1, order, std::nullopt, supports)) == "behdpgv");
    CHECK(to_letters(project_transaction(tx1, order, 5, supports)) == "behdp");

    Transaction singles; // all support-1 items of tx 4: j, k, w
    singles.items = {L('j'), L('k'), L('w')};
    CHECK(project_transaction(singles, order, 2, supports).empty());
}

TEST_CASE("projected output is strictly increasing in rank") {
    for (std::uint64_t seed : {8u, 9u}) {
        TransactionDb db = test::random_db(seed);
        ItemOrder order = order_items(db);
        auto supports = support_vector(db);
        for (const auto& tx : db.transactions) {
            auto proj = project_transaction(tx, order, std::nullopt, supports);
            for (std::size_t i = 1; i < proj.size(); ++i)
                CHECK(order.rank(proj[i - 1]) < order.rank(proj[i]));
        }
    }
}
