#ifndef WPS_INGESTION_HPP
#define WPS_INGESTION_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "wps/transactions.hpp"

namespace wps {

/// One access-log record: who asked for which page, when, with what outcome.
struct LogRecord {
    std::string client;     // IP address or user key
    std::int64_t timestamp; // seconds since epoch
    std::string page;       // normalized request path
    int status = 0;
    std::uint64_t bytes = 0;
};

struct SessionConfig {
    /// Gap (seconds) that closes a session; a gap <= threshold keeps it open.
    std::int64_t session_threshold = 1800;
    int min_status = 200;
    int max_status = 399;
    /// Visitor identity; defaults to the client field.
    std::function<std::string(const LogRecord&)> session_key;
};

/// Parses one Common Log Format line. Lines from a Combined-format log are
/// accepted too (trailing referrer/user-agent fields are ignored).
/// Throws ParseError on malformed input, carrying `source` and `line_no`.
LogRecord parse_log_line(std::string_view line, std::uint64_t line_no = 0,
                         std::string_view source = "");

/// Strips query string and fragment, drops the trailing slash (keeping "/")
/// and the scheme://host prefix of absolute-URL targets.
std::string normalize_page(std::string_view target);

struct LogReadResult {
    std::vector<LogRecord> records;
    std::uint64_t lines = 0;
    std::uint64_t parse_errors = 0;
    std::uint64_t bytes = 0;
};

/// Reads a log file, skipping and counting malformed lines.
LogReadResult read_log(const std::string& path);

struct SessionizeStats {
    std::uint64_t records_in = 0;
    std::uint64_t status_filtered = 0;
    std::uint64_t sessions = 0;
};

/// Groups records per visitor, sorts by time, splits on gaps larger than the
/// session threshold and emits one transaction (distinct pages) per session.
/// Records may arrive in any order. Page ids are assigned from the sorted
/// page universe, so the result is independent of input order.
TransactionDb sessionize(const std::vector<LogRecord>& records, const SessionConfig& cfg,
                         PageCatalog catalog = {}, SessionizeStats* stats = nullptr);

/// Loads a flat transaction file: one transaction per non-empty line,
/// whitespace-separated non-negative integer item ids, '#' comments ignored.
/// Duplicate items within a line are dropped and counted.
TransactionDb load_transactions(const std::string& path);

/// Writes the flat transaction format (items ascending within each line).
void save_transactions(const TransactionDb& db, const std::string& path);

} // namespace wps

#endif
