#include "wps/generator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

namespace wps {

namespace {

/// splitmix64; fixed algorithm so generated datasets are identical across
/// standard libraries and platforms.
struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }

    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

std::size_t sample_length(Rng& rng, double avg, std::uint32_t n_items) {
    // Triangular spread around the target keeps the mean on it.
    double spread = std::max(1.0, avg / 2.0);
    double len = avg + (rng.unit() * 2.0 - 1.0) * spread;
    long rounded = std::lround(len);
    rounded = std::max(1l, std::min<long>(rounded, n_items));
    return static_cast<std::size_t>(rounded);
}

std::vector<std::vector<ItemId>> generate_dense(const GenConfig& cfg, Rng& rng) {
    // Pattern templates: item runs whose prefixes many transactions share.
    // A transaction takes a prefix of one template plus occasional noise.
    const std::size_t n_templates = 6;
    std::size_t template_len = std::min<std::size_t>(
        cfg.n_items, static_cast<std::size_t>(std::lround(cfg.avg_size * 1.6)) + 1);
    std::vector<std::vector<ItemId>> templates;
    for (std::size_t t = 0; t < n_templates; ++t) {
        std::vector<ItemId> tpl;
        ItemId start = static_cast<ItemId>(rng.below(cfg.n_items));
        for (std::size_t i = 0; i < template_len; ++i)
            tpl.push_back(static_cast<ItemId>((start + i) % cfg.n_items));
        templates.push_back(std::move(tpl));
    }

    std::vector<std::vector<ItemId>> rows;
    rows.reserve(cfg.n_transactions);
    for (std::uint64_t t = 0; t < cfg.n_transactions; ++t) {
        const auto& tpl = templates[rng.below(n_templates)];
        std::size_t len =
            std::min(sample_length(rng, cfg.avg_size, cfg.n_items), tpl.size());
        std::set<ItemId> tx(tpl.begin(), tpl.begin() + static_cast<std::ptrdiff_t>(len));
        if (rng.unit() < 0.15) tx.insert(static_cast<ItemId>(rng.below(cfg.n_items)));
        rows.emplace_back(tx.begin(), tx.end());
    }
    return rows;
}

std::vector<std::vector<ItemId>> generate_sparse(const GenConfig& cfg, Rng& rng) {
    // Power-law popularity; most items are rare, none dominates.
    std::vector<double> cumulative(cfg.n_items);
    double sum = 0.0;
    for (std::uint32_t i = 0; i < cfg.n_items; ++i) {
        sum += 1.0 / std::pow(static_cast<double>(i + 1), 0.8);
        cumulative[i] = sum;
    }

    auto draw = [&]() -> ItemId {
        double u = rng.unit() * sum;
        auto it = std::lower_bound(cumulative.begin(), cumulative.end(), u);
        return static_cast<ItemId>(it - cumulative.begin());
    };

    std::vector<std::vector<ItemId>> rows;
    rows.reserve(cfg.n_transactions);
    for (std::uint64_t t = 0; t < cfg.n_transactions; ++t) {
        std::size_t len = sample_length(rng, cfg.avg_size, cfg.n_items);
        std::set<ItemId> tx;
        std::size_t attempts = 0;
        while (tx.size() < len && attempts < len * 16) {
            ++attempts;
            tx.insert(draw());
        }
        rows.emplace_back(tx.begin(), tx.end());
    }
    return rows;
}

} // namespace

std::vector<std::vector<ItemId>> generate_transactions(const GenConfig& cfg) {
    if (cfg.n_items == 0) throw ConfigError("generator needs at least one item");
    if (cfg.avg_size < 1.0 || cfg.avg_size > static_cast<double>(cfg.n_items))
        throw ConfigError("avg_size must lie in [1, n_items]");
    Rng rng(cfg.seed * 0x9E3779B97F4A7C15ull + 0xD1B54A32D192ED03ull);
    return cfg.kind == GenKind::Dense ? generate_dense(cfg, rng)
                                      : generate_sparse(cfg, rng);
}

void write_fimi(const std::string& path, const std::vector<std::vector<ItemId>>& rows) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot write file: " + path);
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ' ';
            out << row[i];
        }
        out << '\n';
    }
    if (!out) throw IoError("write failed: " + path);
}

} // namespace wps
