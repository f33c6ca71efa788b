#include "wps/ingestion.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <map>
#include <set>

namespace wps {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

// Days since 1970-01-01 for a proleptic Gregorian date.
std::int64_t days_from_civil(int y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

int month_number(std::string_view name) {
    static constexpr std::array<std::string_view, 12> names = {
        "Jan", "Feb", "Mar", "Apr", "May", "Jun",
        "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};
    for (std::size_t i = 0; i < names.size(); ++i)
        if (name == names[i]) return static_cast<int>(i) + 1;
    return 0;
}

bool parse_int(std::string_view s, std::int64_t& out) {
    const char* b = s.data();
    const char* e = b + s.size();
    auto res = std::from_chars(b, e, out);
    return res.ec == std::errc{} && res.ptr == e;
}

// "10/Oct/2020:13:55:36 +0000" -> epoch seconds.
std::int64_t parse_clf_time(std::string_view s, std::uint64_t line_no, std::string_view source) {
    auto fail = [&](const char* why) -> std::int64_t {
        throw ParseError(std::string("bad timestamp: ") + why, std::string(source), line_no);
    };
    auto parts = split_ws(s);
    if (parts.empty() || parts.size() > 2) fail("expected 'date zone'");
    std::string_view dt = parts[0];

    std::int64_t day, year, hh, mm, ss;
    // dd/Mon/yyyy:HH:MM:SS
    std::size_t s1 = dt.find('/');
    std::size_t s2 = dt.find('/', s1 == std::string_view::npos ? 0 : s1 + 1);
    std::size_t c1 = dt.find(':', s2 == std::string_view::npos ? 0 : s2 + 1);
    if (s1 == std::string_view::npos || s2 == std::string_view::npos || c1 == std::string_view::npos)
        fail("expected dd/Mon/yyyy:HH:MM:SS");
    if (!parse_int(dt.substr(0, s1), day)) fail("day");
    int mon = month_number(dt.substr(s1 + 1, s2 - s1 - 1));
    if (mon == 0) fail("month name");
    if (!parse_int(dt.substr(s2 + 1, c1 - s2 - 1), year)) fail("year");
    std::size_t c2 = dt.find(':', c1 + 1);
    std::size_t c3 = dt.find(':', c2 == std::string_view::npos ? 0 : c2 + 1);
    if (c2 == std::string_view::npos || c3 == std::string_view::npos) fail("time of day");
    if (!parse_int(dt.substr(c1 + 1, c2 - c1 - 1), hh)) fail("hour");
    if (!parse_int(dt.substr(c2 + 1, c3 - c2 - 1), mm)) fail("minute");
    if (!parse_int(dt.substr(c3 + 1), ss)) fail("second");
    if (day < 1 || day > 31 || hh < 0 || hh > 23 || mm < 0 || mm > 59 || ss < 0 || ss > 60)
        fail("field range");

    std::int64_t offset = 0;
    if (parts.size() == 2) {
        std::string_view z = parts[1];
        if (z.size() != 5 || (z[0] != '+' && z[0] != '-')) fail("zone offset");
        std::int64_t zh, zm;
        if (!parse_int(z.substr(1, 2), zh) || !parse_int(z.substr(3, 2), zm)) fail("zone offset");
        offset = (zh * 3600 + zm * 60) * (z[0] == '-' ? -1 : 1);
    }

    std::int64_t t = days_from_civil(static_cast<int>(year), static_cast<unsigned>(mon),
                                     static_cast<unsigned>(day)) *
                         86400 +
                     hh * 3600 + mm * 60 + ss - offset;
    if (t < 0) fail("timestamp before epoch");
    return t;
}

} // namespace

std::string normalize_page(std::string_view target) {
    // Absolute-URL targets (proxy style): keep the path part only.
    for (std::string_view scheme : {"http://", "https://"}) {
        if (target.substr(0, scheme.size()) == scheme) {
            std::size_t slash = target.find('/', scheme.size());
            target = slash == std::string_view::npos ? std::string_view("/")
                                                     : target.substr(slash);
            break;
        }
    }
    std::size_t cut = target.find_first_of("?#");
    if (cut != std::string_view::npos) target = target.substr(0, cut);
    while (target.size() > 1 && target.back() == '/') target.remove_suffix(1);
    return std::string(target);
}

LogRecord parse_log_line(std::string_view line, std::uint64_t line_no, std::string_view source) {
    auto fail = [&](const char* why) -> LogRecord {
        throw ParseError(std::string("malformed log line: ") + why, std::string(source), line_no);
    };
    line = trim(line);
    if (line.empty()) fail("empty line");

    std::size_t lb = line.find('[');
    std::size_t rb = line.find(']', lb == std::string_view::npos ? 0 : lb);
    if (lb == std::string_view::npos || rb == std::string_view::npos) fail("missing [time]");
    auto head = split_ws(line.substr(0, lb));
    if (head.empty()) fail("missing client field");

    std::size_t q1 = line.find('"', rb);
    std::size_t q2 = q1 == std::string_view::npos ? std::string_view::npos : line.find('"', q1 + 1);
    if (q1 == std::string_view::npos || q2 == std::string_view::npos) fail("missing request");
    auto request = split_ws(line.substr(q1 + 1, q2 - q1 - 1));
    if (request.size() < 2) fail("request lacks a target");

    auto tail = split_ws(line.substr(q2 + 1));
    if (tail.empty()) fail("missing status");

    LogRecord rec;
    rec.client = std::string(head[0]);
    rec.timestamp = parse_clf_time(line.substr(lb + 1, rb - lb - 1), line_no, source);
    rec.page = normalize_page(request[1]);
    if (rec.page.empty()) fail("empty page after normalization");

    std::int64_t status;
    if (!parse_int(tail[0], status) || status < 0) fail("status code");
    rec.status = static_cast<int>(status);

    if (tail.size() > 1 && tail[1] != "-") {
        std::int64_t bytes;
        if (!parse_int(tail[1], bytes) || bytes < 0) fail("byte count");
        rec.bytes = static_cast<std::uint64_t>(bytes);
    }
    return rec;
}

LogReadResult read_log(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open log file: " + path);
    LogReadResult out;
    std::string line;
    while (std::getline(in, line)) {
        ++out.lines;
        out.bytes += line.size() + 1;
        if (trim(line).empty()) continue;
        try {
            out.records.push_back(parse_log_line(line, out.lines, path));
        } catch (const ParseError&) {
            ++out.parse_errors;
        }
    }
    return out;
}

TransactionDb sessionize(const std::vector<LogRecord>& records, const SessionConfig& cfg,
                         PageCatalog catalog, SessionizeStats* stats) {
    if (cfg.session_threshold <= 0)
        throw ConfigError("session_threshold must be positive");
    auto key_of = cfg.session_key ? cfg.session_key
                                  : [](const LogRecord& r) { return r.client; };

    SessionizeStats local;
    local.records_in = records.size();

    std::map<std::string, std::vector<const LogRecord*>> per_client;
    for (const auto& r : records) {
        if (r.status < cfg.min_status || r.status > cfg.max_status) {
            ++local.status_filtered;
            continue;
        }
        per_client[key_of(r)].push_back(&r);
    }

    // Sessions as page-string sets first; ids are assigned afterwards from the
    // sorted page universe so shuffled inputs produce the same transactions.
    std::vector<std::set<std::string>> sessions;
    for (auto& [client, recs] : per_client) {
        std::stable_sort(recs.begin(), recs.end(),
                         [](const LogRecord* a, const LogRecord* b) {
                             return a->timestamp < b->timestamp;
                         });
        std::set<std::string> pages;
        std::int64_t last = 0;
        for (const LogRecord* r : recs) {
            if (!pages.empty() && r->timestamp - last > cfg.session_threshold) {
                sessions.push_back(std::move(pages));
                pages.clear();
            }
            pages.insert(r->page);
            last = r->timestamp;
        }
        if (!pages.empty()) sessions.push_back(std::move(pages));
    }
    local.sessions = sessions.size();

    std::set<std::string> universe;
    for (const auto& s : sessions) universe.insert(s.begin(), s.end());
    for (const auto& page : universe) catalog.add(page);

    TransactionDb db;
    for (const auto& s : sessions) {
        std::vector<ItemId> items;
        items.reserve(s.size());
        for (const auto& page : s) items.push_back(*catalog.find(page));
        db.add_transaction(std::move(items));
    }
    db.universe_items = catalog.size();
    db.catalog = std::move(catalog);
    if (stats) *stats = local;
    return db;
}

TransactionDb load_transactions(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open transaction file: " + path);
    TransactionDb db;
    db.source_path = path;
    std::string line;
    std::uint64_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        db.source_bytes += line.size() + 1;
        std::string_view sv = trim(line);
        if (sv.empty() || sv.front() == '#') continue;
        std::vector<ItemId> items;
        for (std::string_view tok : split_ws(sv)) {
            std::int64_t v;
            if (!parse_int(tok, v) || v < 0)
                throw ParseError("expected a non-negative integer item id, got '" +
                                     std::string(tok) + "'",
                                 path, line_no);
            if (v > kMaxItemId)
                throw ParseError("item id " + std::string(tok) + " exceeds the supported "
                                 "maximum " + std::to_string(kMaxItemId),
                                 path, line_no);
            items.push_back(static_cast<ItemId>(v));
        }
        db.add_transaction(std::move(items));
    }
    db.source_scans = 1;
    return db;
}

void save_transactions(const TransactionDb& db, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot write transaction file: " + path);
    for (const auto& tx : db.transactions) {
        for (std::size_t i = 0; i < tx.items.size(); ++i) {
            if (i) out << ' ';
            out << tx.items[i];
        }
        out << '\n';
    }
    if (!out) throw IoError("write failed: " + path);
}

} // namespace wps
