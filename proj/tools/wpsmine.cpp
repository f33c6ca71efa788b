// wpsmine: build, query and maintain a web page set mining index.
//
// Subcommands: ingest, gen, build, stats, mine, rules, access, append, bench.
// All outputs are deterministic for fixed inputs, flags and seeds (timing
// fields excepted). Exit code is 0 iff the command succeeded.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "wps/access.hpp"
#include "wps/bench.hpp"
#include "wps/generator.hpp"
#include "wps/incremental.hpp"
#include "wps/ingestion.hpp"
#include "wps/mining.hpp"
#include "wps/storage.hpp"

namespace {

using nlohmann::json;

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw wps::IoError("cannot write file: " + path);
    out << text;
    if (!text.empty() && text.back() != '\n') out << '\n';
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty())
        std::cout << text << (text.empty() || text.back() == '\n' ? "" : "\n");
    else
        write_text(out_path, text);
}

std::vector<std::string> read_catalog_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw wps::IoError("cannot open catalog file: " + path);
    std::vector<std::string> pages;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) pages.push_back(line);
    }
    return pages;
}

void write_catalog_file(const std::string& path, const wps::PageCatalog& catalog) {
    std::ostringstream os;
    for (wps::ItemId i = 0; i < catalog.size(); ++i) os << catalog.page(i) << '\n';
    write_text(path, os.str());
}

void session_flags(CLI::App* cmd, std::int64_t& threshold, int& min_status,
                   int& max_status) {
    cmd->add_option("--session-threshold", threshold,
                    "Gap in seconds that closes a session")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--min-status", min_status, "Lowest accepted HTTP status");
    cmd->add_option("--max-status", max_status, "Highest accepted HTTP status");
}

int cmd_ingest(const std::string& log_path, const std::string& out_path,
               const std::string& catalog_out, const wps::SessionConfig& cfg) {
    wps::LogReadResult log = wps::read_log(log_path);
    wps::SessionizeStats stats;
    wps::TransactionDb db = wps::sessionize(log.records, cfg, {}, &stats);
    db.source_path = log_path;
    db.source_scans = 1;
    db.source_bytes = log.bytes;
    wps::save_transactions(db, out_path);
    if (!catalog_out.empty() && db.catalog) write_catalog_file(catalog_out, *db.catalog);

    json j{{"log", log_path},
           {"lines", log.lines},
           {"parse_errors", log.parse_errors},
           {"records", stats.records_in},
           {"status_filtered", stats.status_filtered},
           {"sessions", stats.sessions},
           {"transactions", db.size()},
           {"pages", db.universe_items},
           {"out", out_path}};
    std::cout << j.dump(2) << '\n';
    return 0;
}

int cmd_gen(const wps::GenConfig& cfg, const std::string& out_path) {
    auto rows = wps::generate_transactions(cfg);
    wps::write_fimi(out_path, rows);
    std::uint64_t total = 0;
    for (const auto& r : rows) total += r.size();
    json j{{"transactions", rows.size()},
           {"avg_size", rows.empty() ? 0.0 : static_cast<double>(total) / rows.size()},
           {"out", out_path}};
    std::cout << j.dump(2) << '\n';
    return 0;
}

int cmd_build(const std::string& tx_path, const std::string& catalog_path,
              const std::string& index_base, const wps::StorageConfig& cfg,
              const std::string& format, const std::string& stats_out) {
    wps::TransactionDb db = wps::load_transactions(tx_path);
    if (!catalog_path.empty()) {
        wps::PageCatalog catalog;
        for (const std::string& page : read_catalog_file(catalog_path)) catalog.add(page);
        if (catalog.size() < db.universe_items)
            throw wps::ConfigError("catalog covers fewer pages than the transaction file");
        db.universe_items = catalog.size();
        db.catalog = std::move(catalog);
    }
    wps::BuildOutputs out = wps::build_and_write(db, cfg, index_base);

    if (format == "csv") {
        std::string text = wps::stats_csv_header() + "\n" + wps::stats_to_csv(out.stats);
        emit(text, stats_out);
    } else {
        json j = json::parse(wps::stats_to_json(out.stats));
        j["io"] = {{"blocks_written", out.io.blocks_written},
                   {"source_scans", out.io.source_scans}};
        emit(j.dump(2), stats_out);
    }
    return 0;
}

int cmd_stats(const std::string& index_base, const std::string& format,
              const std::string& out_path) {
    wps::IndexHandle h = wps::open_index(index_base);
    wps::IndexStatsReport r = wps::index_stats(h);
    if (format == "csv") {
        emit(wps::stats_csv_header() + "\n" + wps::stats_to_csv(r), out_path);
        return 0;
    }
    const wps::IndexMeta& m = h.meta();
    json j = json::parse(wps::stats_to_json(r));
    j["layers"] = {{"excellent", m.layer_histogram[0]},
                   {"medium", m.layer_histogram[1]},
                   {"weak", m.layer_histogram[2]},
                   {"high", m.layer_high},
                   {"low", m.layer_low}};
    j["updates"] = {{"nodes_created", m.nodes_created},
                    {"count_updates", m.count_updates},
                    {"appended_batches", m.appended_batches},
                    {"appended_transactions", m.appended_transactions}};
    j["order_descending"] = m.order_descending;
    j["source_scans"] = m.source_scans;
    emit(j.dump(2), out_path);
    return 0;
}

int cmd_mine(const std::string& index_base, std::uint32_t min_support,
             const std::string& algorithm, const std::string& out_path) {
    wps::IndexHandle h = wps::open_index(index_base);
    std::vector<wps::ItemsetResult> results = algorithm == "levelwise"
                                                  ? wps::mine_levelwise(h, min_support)
                                                  : wps::mine_fp(h, min_support);
    std::ostringstream os;
    wps::write_itemsets(os, results, [&](wps::ItemId i) { return h.item_key(i); });
    emit(os.str(), out_path);
    return 0;
}

int cmd_rules(const std::string& itemsets_path, double min_confidence,
              const std::string& out_path) {
    auto itemsets = wps::read_itemsets(itemsets_path);
    auto rules = wps::generate_rules_keyed(itemsets, min_confidence);
    std::ostringstream os;
    wps::write_rules_csv(os, rules);
    emit(os.str(), out_path);
    return 0;
}

int cmd_access(const std::string& index_base, const std::string& method,
               const std::string& item_key, std::uint32_t min_support,
               const std::string& out_path) {
    wps::IndexHandle h = wps::open_index(index_base);
    std::ostringstream os;

    auto dump_rows = [&](const wps::ProjectedDb& db) {
        for (const auto& row : db.rows) {
            for (std::size_t i = 0; i < row.items.size(); ++i) {
                if (i) os << ' ';
                os << h.item_key(row.items[i]);
            }
            os << " *" << row.multiplicity << '\n';
        }
    };

    if (method == "support") {
        dump_rows(wps::support_projection(h, min_support));
    } else {
        auto item = h.item_by_key(item_key);
        if (!item) throw wps::ConfigError("unknown item key: " + item_key);
        if (method == "item") {
            dump_rows(wps::item_projection(h, *item));
        } else { // prefix: normalized paths as conditional transactions
            for (const wps::PrefixPath& raw : wps::prefix_paths(h, *item)) {
                wps::PrefixPath p = wps::normalize_path(raw);
                for (std::size_t i = p.entries.size(); i-- > 0;) {
                    os << h.item_key(p.entries[i].first);
                    if (i) os << ' ';
                }
                os << " *" << p.anchor_support() << '\n';
            }
        }
    }
    emit(os.str(), out_path);
    return 0;
}

int cmd_append(const std::string& index_base, const std::string& tx_path,
               const std::string& log_path, const wps::SessionConfig& session_cfg,
               const std::string& out_path) {
    wps::IndexHandle h = wps::open_index(index_base, wps::OpenMode::ReadWrite);
    wps::DeltaBatch batch;

    if (!tx_path.empty()) {
        wps::TransactionDb delta = wps::load_transactions(tx_path);
        for (wps::Transaction& tx : delta.transactions) {
            tx.tid = 0; // assigned after the stored tid range
            batch.transactions.push_back(std::move(tx));
        }
        batch.tag = tx_path;
    } else {
        wps::PageCatalog catalog;
        for (const std::string& page : h.meta().catalog_pages) catalog.add(page);
        wps::LogReadResult log = wps::read_log(log_path);
        wps::TransactionDb delta = wps::sessionize(log.records, session_cfg, catalog);
        for (wps::Transaction& tx : delta.transactions) {
            tx.tid = 0;
            batch.transactions.push_back(std::move(tx));
        }
        if (delta.catalog)
            for (wps::ItemId i = 0; i < delta.catalog->size(); ++i)
                batch.catalog_pages.push_back(delta.catalog->page(i));
        batch.tag = log_path;
    }

    wps::UpdateReport report = wps::append_transactions(h, batch);
    emit(wps::update_report_json(report, h), out_path);
    return 0;
}

int cmd_rebuild(const std::string& index_base, const std::string& out_path) {
    wps::IndexHandle h = wps::open_index(index_base, wps::OpenMode::ReadWrite);
    wps::reorder_rebuild(h);
    wps::IndexStatsReport r = wps::index_stats(h);
    json j = json::parse(wps::stats_to_json(r));
    j["order_descending"] = h.meta().order_descending;
    emit(j.dump(2), out_path);
    return 0;
}

int cmd_bench(const std::string& index_base, const std::string& items_csv, bool all_items,
              const std::string& supports_csv, const std::string& format,
              const std::string& out_path) {
    wps::IndexHandle h = wps::open_index(index_base);

    std::vector<wps::ItemId> items;
    if (all_items) {
        for (const auto& info : h.items()) items.push_back(info.id);
    } else if (!items_csv.empty()) {
        std::istringstream is(items_csv);
        std::string key;
        while (std::getline(is, key, ',')) {
            auto id = h.item_by_key(key);
            if (!id) throw wps::ConfigError("unknown item key: " + key);
            items.push_back(*id);
        }
    }
    std::vector<std::uint32_t> supports;
    if (!supports_csv.empty()) {
        std::istringstream is(supports_csv);
        std::string tok;
        while (std::getline(is, tok, ',')) {
            int v = std::stoi(tok);
            if (v < 1) throw wps::ConfigError("min supports must be >= 1");
            supports.push_back(static_cast<std::uint32_t>(v));
        }
    }
    if (items.empty() && supports.empty())
        throw wps::ConfigError("bench: give --items, --all-items or --min-supports");

    wps::BenchReport report = wps::run_bench(h, items, supports);
    emit(format == "csv" ? wps::bench_to_csv(report) : wps::bench_to_json(report),
         out_path);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Web page set mining index"};
    app.require_subcommand(1);

    // ingest
    auto* ingest = app.add_subcommand("ingest", "Sessionize an access log");
    std::string log_path, out_path, catalog_out;
    std::int64_t threshold = 1800;
    int min_status = 200, max_status = 399;
    ingest->add_option("--log", log_path, "Access log (Common Log Format)")->required();
    ingest->add_option("--out", out_path, "Transaction file to write")->required();
    ingest->add_option("--catalog-out", catalog_out, "Page catalog to write");
    session_flags(ingest, threshold, min_status, max_status);

    // gen
    auto* gen = app.add_subcommand("gen", "Generate synthetic transactions");
    wps::GenConfig gen_cfg;
    std::string gen_kind = "dense", gen_out;
    gen->add_option("--kind", gen_kind, "dense: few items, template-driven co-occurrence; "
                                        "sparse: power-law popularity over many items")
        ->check(CLI::IsMember({"dense", "sparse"}));
    gen->add_option("--transactions", gen_cfg.n_transactions, "Number of transactions")
        ->required();
    gen->add_option("--items", gen_cfg.n_items, "Item universe size");
    gen->add_option("--avg-size", gen_cfg.avg_size, "Target mean transaction size");
    gen->add_option("--seed", gen_cfg.seed, "RNG seed");
    gen->add_option("--out", gen_out, "Transaction file to write")->required();

    // build
    auto* build = app.add_subcommand("build", "Build an index from transactions");
    std::string tx_path, index_base, catalog_path, format = "json", stats_out;
    wps::StorageConfig storage_cfg;
    bool low_given = false;
    build->add_option("--tx", tx_path, "Flat transaction file")->required();
    build->add_option("--index", index_base, "Index base path")->required();
    build->add_option("--catalog", catalog_path, "Page catalog (from ingest)");
    build->add_option("--block-size", storage_cfg.block_size, "Block size in bytes")
        ->check(CLI::Range(static_cast<std::uint32_t>(wps::kNodeRecordSize), 1u << 30));
    build->add_option("--n-buckets", storage_cfg.n_buckets, "Hash buckets")
        ->check(CLI::Range(1, 65535));
    build->add_option("--k-avg", storage_cfg.k_avg, "Correlation clustering threshold")
        ->check(CLI::NonNegativeNumber);
    build->add_option("--k-sup", storage_cfg.k_sup, "Minimum relative support")
        ->check(CLI::Range(0.0, 1.0));
    auto* high_opt =
        build->add_option("--layer-high", storage_cfg.layer_high, "Excellent threshold")
            ->check(CLI::Range(2u, 0xFFFFFFFFu));
    auto* low_opt = build->add_option_function<std::uint32_t>(
        "--layer-low",
        [&](std::uint32_t v) {
            storage_cfg.layer_low = v;
            low_given = true;
        },
        "Medium threshold");
    low_opt->check(CLI::Range(2u, 0xFFFFFFFFu));
    build->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
    build->add_option("--out", stats_out, "Stats report file (default stdout)");

    // stats
    auto* stats = app.add_subcommand("stats", "Report index characteristics");
    stats->add_option("--index", index_base, "Index base path")->required();
    stats->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
    stats->add_option("--out", stats_out, "Report file (default stdout)");

    // mine
    auto* mine = app.add_subcommand("mine", "Extract frequent itemsets");
    std::uint32_t min_support = 2;
    std::string algorithm = "fp";
    mine->add_option("--index", index_base)->required();
    mine->add_option("--min-support", min_support)->required()->check(CLI::PositiveNumber);
    mine->add_option("--algorithm", algorithm)->check(CLI::IsMember({"fp", "levelwise"}));
    mine->add_option("--out", out_path, "Itemset file (default stdout)");

    // rules
    auto* rules = app.add_subcommand("rules", "Derive association rules");
    std::string itemsets_path;
    double min_confidence = 0.5;
    rules->add_option("--itemsets", itemsets_path, "Itemset file from mine")->required();
    rules->add_option("--min-confidence", min_confidence)->check(CLI::Range(0.0, 1.0));
    rules->add_option("--out", out_path, "Rules CSV (default stdout)");

    // access
    auto* access = app.add_subcommand("access", "Dump a projection of the database");
    std::string method = "support", item_key;
    access->add_option("--index", index_base)->required();
    access->add_option("--method", method)
        ->check(CLI::IsMember({"prefix", "support", "item"}));
    access->add_option("--item", item_key, "Item key for prefix/item methods");
    access->add_option("--min-support", min_support, "Threshold for the support method")
        ->check(CLI::PositiveNumber);
    access->add_option("--out", out_path);

    // append
    auto* append = app.add_subcommand("append", "Fold new transactions into an index");
    std::string append_tx, append_log;
    append->add_option("--index", index_base)->required();
    auto* tx_opt = append->add_option("--tx", append_tx, "Flat transaction file");
    auto* log_opt = append->add_option("--log", append_log, "Access log segment");
    tx_opt->excludes(log_opt);
    session_flags(append, threshold, min_status, max_status);
    append->add_option("--out", out_path, "Update report file (default stdout)");

    // rebuild
    auto* rebuild = app.add_subcommand(
        "rebuild", "Re-derive the item order from current supports and rebuild the "
                   "index from its own contents");
    rebuild->add_option("--index", index_base)->required();
    rebuild->add_option("--out", out_path, "Stats report file (default stdout)");

    // bench
    auto* bench = app.add_subcommand("bench", "Hash-index vs full-scan comparison");
    std::string bench_items, bench_supports;
    bool all_items = false;
    bench->add_option("--index", index_base)->required();
    bench->add_option("--items", bench_items, "Comma-separated item keys");
    bench->add_flag("--all-items", all_items, "Query every indexed item");
    bench->add_option("--min-supports", bench_supports,
                      "Comma-separated thresholds for end-to-end mining");
    bench->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
    bench->add_option("--out", out_path);

    CLI11_PARSE(app, argc, argv);

    try {
        wps::SessionConfig session_cfg;
        session_cfg.session_threshold = threshold;
        session_cfg.min_status = min_status;
        session_cfg.max_status = max_status;

        if (high_opt->count() && !low_given)
            storage_cfg.layer_low = std::max(2u, (storage_cfg.layer_high + 1) / 2);
        if (storage_cfg.layer_high < storage_cfg.layer_low)
            throw wps::ConfigError("--layer-high must be >= --layer-low");

        if (ingest->parsed())
            return cmd_ingest(log_path, out_path, catalog_out, session_cfg);
        if (gen->parsed()) {
            gen_cfg.kind = gen_kind == "sparse" ? wps::GenKind::Sparse : wps::GenKind::Dense;
            return cmd_gen(gen_cfg, gen_out);
        }
        if (build->parsed())
            return cmd_build(tx_path, catalog_path, index_base, storage_cfg, format,
                             stats_out);
        if (stats->parsed()) return cmd_stats(index_base, format, stats_out);
        if (mine->parsed()) return cmd_mine(index_base, min_support, algorithm, out_path);
        if (rules->parsed()) return cmd_rules(itemsets_path, min_confidence, out_path);
        if (access->parsed())
            return cmd_access(index_base, method, item_key, min_support, out_path);
        if (append->parsed()) {
            if (append_tx.empty() && append_log.empty())
                throw wps::ConfigError("append: give --tx or --log");
            return cmd_append(index_base, append_tx, append_log, session_cfg, out_path);
        }
        if (rebuild->parsed()) return cmd_rebuild(index_base, out_path);
        if (bench->parsed())
            return cmd_bench(index_base, bench_items, all_items, bench_supports, format,
                             out_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
