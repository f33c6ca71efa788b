#include <doctest.h>

#include <fstream>
#include <set>

#include "support/fixtures.hpp"
#include "wps/generator.hpp"

using namespace wps;

namespace {

double mean_size(const std::vector<std::vector<ItemId>>& rows) {
    if (rows.empty()) return 0.0;
    std::uint64_t total = 0;
    for (const auto& r : rows) total += r.size();
    return static_cast<double>(total) / static_cast<double>(rows.size());
}

} // namespace

TEST_CASE("dense generation hits the target shape") {
    GenConfig cfg{GenKind::Dense, 1200, 38, 7.0, 42};
    auto rows = generate_transactions(cfg);
    REQUIRE(rows.size() == 1200);
    CHECK(mean_size(rows) == doctest::Approx(7.0).epsilon(0.10));
    for (const auto& r : rows) {
        CHECK(!r.empty());
        std::set<ItemId> dedup(r.begin(), r.end());
        CHECK(dedup.size() == r.size());
        for (ItemId i : r) CHECK(i < 38);
    }
}

TEST_CASE("sparse generation hits the target shape") {
    GenConfig cfg{GenKind::Sparse, 1600, 200, 7.9, 7};
    auto rows = generate_transactions(cfg);
    REQUIRE(rows.size() == 1600);
    CHECK(mean_size(rows) == doctest::Approx(7.9).epsilon(0.10));
}

TEST_CASE("generation is deterministic per seed") {
    GenConfig cfg{GenKind::Sparse, 50, 40, 5.0, 9};
    auto a = generate_transactions(cfg);
    auto b = generate_transactions(cfg);
    CHECK(a == b);

    cfg.seed = 10;
    CHECK(generate_transactions(cfg) != a);
}

TEST_CASE("zero transactions produce an empty file") {
    GenConfig cfg{GenKind::Dense, 0, 10, 3.0, 1};
    auto rows = generate_transactions(cfg);
    CHECK(rows.empty());

    test::TempDir dir;
    std::string path = dir.file("empty.dat");
    write_fimi(path, rows);
    std::ifstream in(path);
    std::string line;
    CHECK(!std::getline(in, line));
}

TEST_CASE("generator validates its configuration") {
    GenConfig cfg{GenKind::Dense, 10, 0, 3.0, 1};
    CHECK_THROWS_AS(generate_transactions(cfg), ConfigError);
    cfg.n_items = 5;
    cfg.avg_size = 9.0;
    CHECK_THROWS_AS(generate_transactions(cfg), ConfigError);
}

TEST_CASE("dense data co-occurs more strongly than sparse data") {
    GenConfig dense{GenKind::Dense, 400, 38, 7.0, 3};
    GenConfig sparse{GenKind::Sparse, 400, 200, 7.0, 3};
    auto d = generate_transactions(dense);
    auto s = generate_transactions(sparse);

    auto mean_jaccard = [](const std::vector<std::vector<ItemId>>& rows) {
        double total = 0.0;
        std::size_t pairs = 0;
        for (std::size_t i = 0; i + 1 < rows.size(); i += 2) {
            std::vector<ItemId> both;
            std::set_intersection(rows[i].begin(), rows[i].end(), rows[i + 1].begin(),
                                  rows[i + 1].end(), std::back_inserter(both));
            double uni = static_cast<double>(rows[i].size() + rows[i + 1].size()) -
                         static_cast<double>(both.size());
            total += static_cast<double>(both.size()) / uni;
            ++pairs;
        }
        return total / static_cast<double>(pairs);
    };
    CHECK(mean_jaccard(d) > 2.0 * mean_jaccard(s));
}
