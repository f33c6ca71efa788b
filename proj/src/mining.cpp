#include "wps/mining.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>

namespace wps {

namespace {

using Row = std::pair<std::vector<ItemId>, std::uint64_t>; // rank-ordered items

/// Recursive pattern growth over a conditional pattern base. Rows hold items
/// with ranks strictly below the current suffix head, in rank order.
void mine_base(const std::vector<Row>& rows, std::vector<ItemId>& suffix,
               std::uint32_t min_support, IndexHandle& handle,
               std::vector<ItemsetResult>& out) {
    std::map<ItemId, std::uint64_t> cond_support;
    for (const auto& [items, count] : rows)
        for (ItemId i : items) cond_support[i] += count;

    std::vector<ItemId> frequent;
    for (const auto& [item, sup] : cond_support)
        if (sup >= min_support) frequent.push_back(item);
    std::sort(frequent.begin(), frequent.end(), [&](ItemId a, ItemId b) {
        return handle.rank(a) > handle.rank(b); // deepest first
    });

    for (ItemId j : frequent) {
        suffix.push_back(j);
        ItemsetResult res;
        res.items = suffix;
        res.support = cond_support[j];
        out.push_back(std::move(res));

        // Conditional base of j: row prefixes before j, restricted to items
        // still frequent here, merged by content.
        std::map<std::vector<ItemId>, std::uint64_t> merged;
        std::uint32_t rj = handle.rank(j);
        for (const auto& [items, count] : rows) {
            if (std::find(items.begin(), items.end(), j) == items.end()) continue;
            std::vector<ItemId> prefix;
            for (ItemId i : items) {
                if (handle.rank(i) >= rj) break;
                if (cond_support[i] >= min_support) prefix.push_back(i);
            }
            if (!prefix.empty()) merged[prefix] += count;
        }
        if (!merged.empty()) {
            std::vector<Row> sub(merged.begin(), merged.end());
            mine_base(sub, suffix, min_support, handle, out);
        }
        suffix.pop_back();
    }
}

bool is_subset(const std::vector<ItemId>& small, const std::vector<ItemId>& big) {
    std::size_t i = 0;
    for (ItemId b : big) {
        if (i == small.size()) return true;
        if (small[i] == b) ++i;
    }
    return i == small.size();
}

template <typename Item>
struct RuleRow {
    std::vector<Item> antecedent;
    std::vector<Item> consequent;
    std::uint64_t support = 0;
    double confidence = 0.0;
};

/// Shared rule expansion: every non-empty proper subset of each itemset of
/// size >= 2 becomes an antecedent candidate.
template <typename Item>
std::vector<RuleRow<Item>> expand_rules(
    const std::map<std::vector<Item>, std::uint64_t>& support_of, double min_confidence) {
    std::vector<RuleRow<Item>> out;
    for (const auto& [items, support] : support_of) {
        std::size_t k = items.size();
        if (k < 2) continue;
        if (k > 24) throw Error("rule expansion over an itemset of size > 24");
        for (std::uint32_t mask = 1; mask + 1 < (1u << k); ++mask) {
            std::vector<Item> a, b;
            for (std::size_t i = 0; i < k; ++i)
                ((mask >> i) & 1u ? a : b).push_back(items[i]);
            auto it = support_of.find(a);
            if (it == support_of.end())
                throw std::logic_error("rule generation: itemsets are not downward closed");
            double confidence =
                static_cast<double>(support) / static_cast<double>(it->second);
            if (confidence >= min_confidence)
                out.push_back({std::move(a), std::move(b), support, confidence});
        }
    }
    std::sort(out.begin(), out.end(), [](const RuleRow<Item>& x, const RuleRow<Item>& y) {
        if (x.antecedent.size() != y.antecedent.size())
            return x.antecedent.size() < y.antecedent.size();
        if (x.antecedent != y.antecedent) return x.antecedent < y.antecedent;
        return x.consequent < y.consequent;
    });
    return out;
}

} // namespace

std::vector<ItemsetResult> mine_fp(IndexHandle& handle, std::uint32_t min_support) {
    if (min_support < 1) throw ConfigError("min_support must be >= 1");

    std::vector<ItemInfo> items = handle.items();
    std::sort(items.begin(), items.end(),
              [](const ItemInfo& a, const ItemInfo& b) { return a.rank > b.rank; });

    std::vector<ItemsetResult> out;
    for (const auto& info : items) {
        if (info.support < min_support) continue;
        out.push_back({{info.id}, info.support});

        std::map<std::vector<ItemId>, std::uint64_t> merged;
        for (const PrefixPath& raw : prefix_paths(handle, info.id)) {
            PrefixPath p = normalize_path(raw);
            if (p.entries.size() < 2) continue;
            std::vector<ItemId> row;
            row.reserve(p.entries.size() - 1);
            for (std::size_t i = p.entries.size(); i-- > 1;)
                row.push_back(p.entries[i].first);
            merged[row] += p.anchor_support();
        }
        if (merged.empty()) continue;
        std::vector<Row> base(merged.begin(), merged.end());
        std::vector<ItemId> suffix{info.id};
        mine_base(base, suffix, min_support, handle, out);
    }

    canonicalize(out, [&](ItemId i) { return handle.item_key(i); });
    return out;
}

std::vector<ItemsetResult> mine_levelwise(IndexHandle& handle, std::uint32_t min_support) {
    if (min_support < 1) throw ConfigError("min_support must be >= 1");

    ProjectedDb pdb = support_projection(handle, min_support);
    std::vector<std::pair<std::vector<ItemId>, std::uint64_t>> rows;
    rows.reserve(pdb.rows.size());
    for (const ProjectedTx& r : pdb.rows) {
        std::vector<ItemId> ids = r.items;
        std::sort(ids.begin(), ids.end());
        rows.emplace_back(std::move(ids), r.multiplicity);
    }

    std::vector<ItemsetResult> out;

    std::map<ItemId, std::uint64_t> singles;
    for (const auto& [ids, mult] : rows)
        for (ItemId i : ids) singles[i] += mult;

    std::vector<std::vector<ItemId>> level;
    for (const auto& [item, sup] : singles)
        if (sup >= min_support) {
            level.push_back({item});
            out.push_back({{item}, sup});
        }

    while (!level.empty()) {
        // Join step: candidates from pairs sharing all but the last item.
        std::set<std::vector<ItemId>> level_set(level.begin(), level.end());
        std::vector<std::vector<ItemId>> candidates;
        for (std::size_t i = 0; i < level.size(); ++i) {
            for (std::size_t j = i + 1; j < level.size(); ++j) {
                if (!std::equal(level[i].begin(), level[i].end() - 1, level[j].begin(),
                                level[j].end() - 1))
                    continue;
                std::vector<ItemId> cand = level[i];
                cand.push_back(level[j].back());
                if (cand[cand.size() - 2] > cand.back())
                    std::swap(cand[cand.size() - 2], cand.back());
                // Prune: all (k-1)-subsets must be frequent.
                bool ok = true;
                for (std::size_t drop = 0; ok && drop + 2 < cand.size(); ++drop) {
                    std::vector<ItemId> sub = cand;
                    sub.erase(sub.begin() + static_cast<std::ptrdiff_t>(drop));
                    ok = level_set.count(sub) > 0;
                }
                if (ok) candidates.push_back(std::move(cand));
            }
        }
        std::sort(candidates.begin(), candidates.end());
        candidates.erase(std::unique(candidates.begin(), candidates.end()),
                         candidates.end());

        std::vector<std::vector<ItemId>> next;
        for (const auto& cand : candidates) {
            std::uint64_t sup = 0;
            for (const auto& [ids, mult] : rows)
                if (is_subset(cand, ids)) sup += mult;
            if (sup >= min_support) {
                next.push_back(cand);
                out.push_back({cand, sup});
            }
        }
        level = std::move(next);
    }

    canonicalize(out, [&](ItemId i) { return handle.item_key(i); });
    return out;
}

std::vector<ItemsetResult> oracle_bruteforce(const TransactionDb& db,
                                             std::uint32_t min_support) {
    if (min_support < 1) throw ConfigError("min_support must be >= 1");

    std::vector<std::uint32_t> supports = support_vector(db);
    std::vector<ItemId> frequent;
    for (ItemId i = 0; i < supports.size(); ++i)
        if (supports[i] >= min_support) frequent.push_back(i);

    if (db.distinct_items() > 30 && frequent.size() > 20)
        throw ConfigError("oracle_bruteforce: database too large (" +
                          std::to_string(db.distinct_items()) + " items, " +
                          std::to_string(frequent.size()) + " frequent)");

    std::vector<std::uint32_t> index_of(supports.size(), kNoRank);
    for (std::size_t i = 0; i < frequent.size(); ++i) index_of[frequent[i]] = i;

    std::unordered_map<std::uint32_t, std::uint64_t> mask_count;
    for (const auto& tx : db.transactions) {
        std::uint32_t mask = 0;
        std::uint32_t width = 0;
        for (ItemId i : tx.items)
            if (index_of[i] != kNoRank) {
                if (index_of[i] >= 32 || ++width > 24)
                    throw ConfigError("oracle_bruteforce: transaction too wide for "
                                      "exhaustive enumeration");
                mask |= 1u << index_of[i];
            }
        for (std::uint32_t sub = mask; sub != 0; sub = (sub - 1) & mask)
            ++mask_count[sub];
    }

    std::vector<ItemsetResult> out;
    for (const auto& [mask, count] : mask_count) {
        if (count < min_support) continue;
        ItemsetResult r;
        r.support = count;
        for (std::size_t i = 0; i < frequent.size(); ++i)
            if ((mask >> i) & 1u) r.items.push_back(frequent[i]);
        out.push_back(std::move(r));
    }
    canonicalize(out, [&](ItemId i) { return db.item_key(i); });
    return out;
}

std::vector<AssociationRule> generate_rules(const std::vector<ItemsetResult>& itemsets,
                                            double min_confidence) {
    std::map<std::vector<ItemId>, std::uint64_t> support_of;
    for (const auto& r : itemsets) {
        std::vector<ItemId> ids = r.items;
        std::sort(ids.begin(), ids.end());
        support_of[std::move(ids)] = r.support;
    }
    std::vector<AssociationRule> out;
    for (auto& row : expand_rules(support_of, min_confidence))
        out.push_back({std::move(row.antecedent), std::move(row.consequent), row.support,
                       row.confidence});
    return out;
}

void canonicalize(std::vector<ItemsetResult>& results, const ItemKeyFn& key_of) {
    std::unordered_map<ItemId, std::string> keys;
    auto key = [&](ItemId i) -> const std::string& {
        auto it = keys.find(i);
        if (it == keys.end()) it = keys.emplace(i, key_of(i)).first;
        return it->second;
    };
    for (auto& r : results)
        std::sort(r.items.begin(), r.items.end(),
                  [&](ItemId a, ItemId b) { return natural_less(key(a), key(b)); });
    std::sort(results.begin(), results.end(),
              [&](const ItemsetResult& a, const ItemsetResult& b) {
                  if (a.items.size() != b.items.size())
                      return a.items.size() < b.items.size();
                  for (std::size_t i = 0; i < a.items.size(); ++i) {
                      if (a.items[i] == b.items[i]) continue;
                      return natural_less(key(a.items[i]), key(b.items[i]));
                  }
                  return false;
              });
}

void write_itemsets(std::ostream& out, const std::vector<ItemsetResult>& results,
                    const ItemKeyFn& key_of) {
    for (const auto& r : results) {
        for (std::size_t i = 0; i < r.items.size(); ++i) {
            if (i) out << ' ';
            out << key_of(r.items[i]);
        }
        out << " (" << r.support << ")\n";
    }
}

std::vector<KeyedItemset> read_itemsets(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open itemset file: " + path);
    std::vector<KeyedItemset> out;
    std::string line;
    std::uint64_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream is(line);
        std::vector<std::string> toks;
        std::string t;
        while (is >> t) toks.push_back(t);
        if (toks.empty()) continue;
        std::string& last = toks.back();
        if (toks.size() < 2 || last.size() < 3 || last.front() != '(' || last.back() != ')')
            throw ParseError("expected 'item... (support)'", path, line_no);
        KeyedItemset row;
        try {
            row.support = std::stoull(last.substr(1, last.size() - 2));
        } catch (const std::exception&) {
            throw ParseError("bad support in '" + last + "'", path, line_no);
        }
        row.keys.assign(toks.begin(), toks.end() - 1);
        out.push_back(std::move(row));
    }
    return out;
}

std::vector<KeyedRule> generate_rules_keyed(const std::vector<KeyedItemset>& itemsets,
                                            double min_confidence) {
    std::map<std::vector<std::string>, std::uint64_t> support_of;
    for (const auto& r : itemsets) {
        std::vector<std::string> keys = r.keys;
        std::sort(keys.begin(), keys.end(), natural_less);
        support_of[std::move(keys)] = r.support;
    }
    std::vector<KeyedRule> out;
    for (auto& row : expand_rules(support_of, min_confidence))
        out.push_back({std::move(row.antecedent), std::move(row.consequent), row.support,
                       row.confidence});
    return out;
}

void write_rules_csv(std::ostream& out, const std::vector<KeyedRule>& rules) {
    out << "antecedent;consequent;support;confidence\n";
    auto field = [&](const std::vector<std::string>& keys) {
        for (std::size_t i = 0; i < keys.size(); ++i) {
            if (i) out << ' ';
            out << keys[i];
        }
    };
    for (const auto& r : rules) {
        field(r.antecedent);
        out << ';';
        field(r.consequent);
        out << ';' << r.support << ';' << r.confidence << '\n';
    }
}

} // namespace wps
