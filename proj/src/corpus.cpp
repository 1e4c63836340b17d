#include "csn/corpus.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>

#include <json.hpp>

namespace csn {

namespace {

bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int days_in_month(int y, int m) {
    static const int d[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m == 2 && is_leap(y)) return 29;
    return d[m - 1];
}

std::int64_t days_from_civil(int y, int m, int d) {
    // Howard Hinnant's algorithm; valid for all proleptic Gregorian dates.
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

}  // namespace

bool parse_iso8601_utc(const std::string& s, std::int64_t& out) {
    int y, mo, d, h, mi, se;
    char sep, zone = '\0';
    int n = std::sscanf(s.c_str(), "%4d-%2d-%2d%c%2d:%2d:%2d%c", &y, &mo, &d,
                        &sep, &h, &mi, &se, &zone);
    if (n < 7 || (sep != 'T' && sep != ' ')) return false;
    if (n == 8 && zone != 'Z') return false;
    if (mo < 1 || mo > 12 || d < 1 || d > days_in_month(y, mo)) return false;
    if (h < 0 || h > 23 || mi < 0 || mi > 59 || se < 0 || se > 60) return false;
    out = days_from_civil(y, mo, d) * 86400 + h * 3600 + mi * 60 + se;
    return true;
}

std::string format_iso8601_utc(std::int64_t t) {
    std::int64_t days = t / 86400;
    std::int64_t sod = t % 86400;
    if (sod < 0) {
        sod += 86400;
        --days;
    }
    // civil_from_days, inverse of the above.
    days += 719468;
    const std::int64_t era = (days >= 0 ? days : days - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(days - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02uT%02lld:%02lld:%02lldZ",
                  static_cast<long long>(y + (m <= 2)), m, d,
                  static_cast<long long>(sod / 3600),
                  static_cast<long long>((sod / 60) % 60),
                  static_cast<long long>(sod % 60));
    return buf;
}

const Article& Corpus::article(const std::string& id) const {
    auto it = index.find(id);
    if (it == index.end()) throw CorpusError("unknown article_id: " + id);
    return articles[it->second];
}

Corpus make_corpus(std::vector<Article> articles) {
    Corpus c;
    c.articles = std::move(articles);
    std::sort(c.articles.begin(), c.articles.end(),
              [](const Article& a, const Article& b) {
                  return a.article_id < b.article_id;
              });
    for (std::size_t i = 0; i < c.articles.size(); ++i) {
        Article& a = c.articles[i];
        if (a.body_norm.text.empty()) a.body_norm = normalize_text(a.body);
        if (a.body_norm.text.empty())
            throw CorpusError("empty body after normalization: " + a.article_id);
        if (!c.index.emplace(a.article_id, i).second)
            throw CorpusError("duplicate article_id: " + a.article_id);
        c.sources.insert(a.source_id);
        if (i == 0) {
            c.span_min = c.span_max = a.published_utc;
        } else {
            c.span_min = std::min(c.span_min, a.published_utc);
            c.span_max = std::max(c.span_max, a.published_utc);
        }
    }
    return c;
}

Corpus load_corpus(const std::string& path, std::ostream& diagnostics,
                   LoadReport* report) {
    std::ifstream in(path);
    if (!in) throw CorpusError("cannot open corpus file: " + path);

    std::vector<Article> articles;
    std::set<std::string> seen_ids;
    LoadReport rep;
    std::string line;
    std::size_t lineno = 0;

    auto reject = [&](const std::string& why) {
        diagnostics << path << ":" << lineno << ": rejected: " << why << "\n";
        ++rep.rejected;
    };

    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            reject("malformed record");
            continue;
        }
        Article a;
        try {
            a.article_id = j.at("article_id").get<std::string>();
            a.source_id = j.at("source_id").get<std::string>();
            a.title = j.value("title", std::string());
            a.body = j.at("body").get<std::string>();
            if (!parse_iso8601_utc(j.at("published_utc").get<std::string>(),
                                   a.published_utc)) {
                reject("unparseable timestamp");
                continue;
            }
        } catch (const nlohmann::json::exception& e) {
            reject(std::string("missing or mistyped field: ") + e.what());
            continue;
        }
        if (!seen_ids.insert(a.article_id).second) {
            reject("duplicate article_id: " + a.article_id);
            continue;
        }
        a.body_norm = normalize_text(a.body);
        if (a.body_norm.text.empty()) {
            reject("empty body after normalization: " + a.article_id);
            continue;
        }
        articles.push_back(std::move(a));
        ++rep.loaded;
    }
    if (report) *report = rep;
    return make_corpus(std::move(articles));
}

std::vector<TimeWindow> window_partition(const Corpus& corpus,
                                         std::int64_t length_seconds) {
    if (corpus.empty()) throw CorpusError("window_partition: empty corpus");
    if (length_seconds <= 0)
        throw CorpusError("window_partition: non-positive window length");

    const std::int64_t anchor = corpus.span_min;
    const std::size_t n_windows = static_cast<std::size_t>(
        (corpus.span_max - anchor) / length_seconds + 1);

    std::vector<TimeWindow> windows(n_windows);
    for (std::size_t i = 0; i < n_windows; ++i) {
        windows[i].index = i;
        windows[i].start_utc = anchor + static_cast<std::int64_t>(i) * length_seconds;
        windows[i].end_utc = windows[i].start_utc + length_seconds;
    }
    for (const Article& a : corpus.articles) {
        auto w = static_cast<std::size_t>((a.published_utc - anchor) / length_seconds);
        windows[w].article_ids.push_back(a.article_id);
    }
    // Drop empty windows; memberships stay a partition of the article set.
    std::erase_if(windows, [](const TimeWindow& w) { return w.article_ids.empty(); });
    return windows;
}

}  // namespace csn
