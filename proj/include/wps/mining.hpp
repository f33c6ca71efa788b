#ifndef WPS_MINING_HPP
#define WPS_MINING_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "wps/access.hpp"
#include "wps/storage.hpp"
#include "wps/transactions.hpp"

namespace wps {

/// A frequent itemset: items in canonical (ascending key) order.
struct ItemsetResult {
    std::vector<ItemId> items;
    std::uint64_t support = 0;

    bool operator==(const ItemsetResult&) const = default;
};

struct AssociationRule {
    std::vector<ItemId> antecedent;
    std::vector<ItemId> consequent;
    std::uint64_t support = 0;   // of antecedent + consequent
    double confidence = 0.0;
};

/// Pattern-growth mining over the index: per item, the conditional pattern
/// base is assembled from normalized prefix paths and mined recursively.
std::vector<ItemsetResult> mine_fp(IndexHandle& handle, std::uint32_t min_support);

/// Level-wise candidate generation over the support projection.
std::vector<ItemsetResult> mine_levelwise(IndexHandle& handle, std::uint32_t min_support);

/// Exhaustive reference miner: counts every subset of every transaction
/// directly against the db. Guarded against blowup; refuses databases beyond
/// 30 distinct items unless at most 20 are frequent.
std::vector<ItemsetResult> oracle_bruteforce(const TransactionDb& db,
                                             std::uint32_t min_support);

/// Emits A -> rest for every non-empty proper subset A of each itemset of
/// size >= 2, keeping rules with confidence >= min_confidence. The input must
/// be downward closed (all miners' output is).
std::vector<AssociationRule> generate_rules(const std::vector<ItemsetResult>& itemsets,
                                            double min_confidence);

/// Sorts each itemset's items by ascending key and the list by (size, items).
void canonicalize(std::vector<ItemsetResult>& results, const ItemKeyFn& key_of);

void write_itemsets(std::ostream& out, const std::vector<ItemsetResult>& results,
                    const ItemKeyFn& key_of);

/// Itemset file rows as written by write_itemsets: keys plus support.
struct KeyedItemset {
    std::vector<std::string> keys;
    std::uint64_t support = 0;
};

std::vector<KeyedItemset> read_itemsets(const std::string& path);

struct KeyedRule {
    std::vector<std::string> antecedent;
    std::vector<std::string> consequent;
    std::uint64_t support = 0;
    double confidence = 0.0;
};

std::vector<KeyedRule> generate_rules_keyed(const std::vector<KeyedItemset>& itemsets,
                                            double min_confidence);

void write_rules_csv(std::ostream& out, const std::vector<KeyedRule>& rules);

} // namespace wps

#endif
