#include "csn/ratings.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace csn {

namespace {

std::string fold(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) {
        return static_cast<char>(std::tolower(c));
    });
    std::erase_if(s, [](char c) { return c == ' ' || c == '-' || c == '_'; });
    return s;
}

template <typename T>
bool parse_level(const std::string& raw,
                 const std::vector<std::pair<std::string, T>>& table,
                 std::optional<T>& out) {
    if (raw.empty()) {
        out.reset();
        return true;
    }
    const std::string key = fold(raw);
    for (const auto& [name, value] : table) {
        if (key == name) {
            out = value;
            return true;
        }
    }
    return false;
}

const std::vector<std::pair<std::string, NewsGuardLabel>> kNewsGuard = {
    {"green", NewsGuardLabel::Green}, {"red", NewsGuardLabel::Red}};

const std::vector<std::pair<std::string, FactualLevel>> kFactual = {
    {"veryhigh", FactualLevel::VeryHigh},
    {"high", FactualLevel::High},
    {"mostlyfactual", FactualLevel::MostlyFactual},
    {"mixed", FactualLevel::Mixed},
    {"low", FactualLevel::Low},
    {"verylow", FactualLevel::VeryLow}};

const std::vector<std::pair<std::string, BiasLevel>> kBias = {
    {"left", BiasLevel::Left},
    {"leftcenter", BiasLevel::LeftCenter},
    {"center", BiasLevel::Center},
    {"rightcenter", BiasLevel::RightCenter},
    {"right", BiasLevel::Right}};

const std::vector<std::pair<std::string, BinaryBias>> kBinary = {
    {"left", BinaryBias::Left}, {"right", BinaryBias::Right}};

double factual_value(FactualLevel l) {
    switch (l) {
        case FactualLevel::VeryHigh: return 1.0;
        case FactualLevel::High: return 0.6;
        case FactualLevel::MostlyFactual: return 0.2;
        case FactualLevel::Mixed: return -0.2;
        case FactualLevel::Low: return -0.6;
        case FactualLevel::VeryLow: return -1.0;
    }
    return 0.0;
}

double bias_value(BiasLevel l) {
    switch (l) {
        case BiasLevel::Left: return -1.0;
        case BiasLevel::LeftCenter: return -0.5;
        case BiasLevel::Center: return 0.0;
        case BiasLevel::RightCenter: return 0.5;
        case BiasLevel::Right: return 1.0;
    }
    return 0.0;
}

std::string country_bucket(const std::string& code) {
    std::string c = code;
    std::transform(c.begin(), c.end(), c.begin(), [](unsigned char ch) {
        return static_cast<char>(std::toupper(ch));
    });
    if (c.empty()) return "unknown";
    if (c == "US") return "US";
    if (c == "RU") return "RU";
    if (c == "UK" || c == "GB") return "UK";
    return "other";
}

}  // namespace

std::vector<SourceRating> load_ratings(const std::string& path,
                                       std::ostream& diagnostics,
                                       std::size_t* rejected_out) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open ratings file: " + path);

    std::vector<SourceRating> ratings;
    std::set<std::string> seen;
    std::string line;
    std::size_t lineno = 0, rejected = 0;

    auto reject = [&](const std::string& why) {
        diagnostics << path << ":" << lineno << ": rejected: " << why << "\n";
        ++rejected;
    };

    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string f;
        while (std::getline(ss, f, '\t')) fields.push_back(f);
        fields.resize(7);
        if (lineno == 1 && fields[0] == "source_id") continue;  // header

        SourceRating r;
        r.source_id = fields[0];
        if (r.source_id.empty()) {
            reject("missing source_id");
            continue;
        }
        if (!parse_level(fields[1], kNewsGuard, r.newsguard)) {
            reject("unknown newsguard level '" + fields[1] + "'");
            continue;
        }
        if (!parse_level(fields[2], kFactual, r.mbfc_factual)) {
            reject("unknown mbfc_factual level '" + fields[2] + "'");
            continue;
        }
        if (!parse_level(fields[3], kBias, r.mbfc_bias)) {
            reject("unknown mbfc_bias level '" + fields[3] + "'");
            continue;
        }
        if (!parse_level(fields[4], kBias, r.allsides_bias)) {
            reject("unknown allsides_bias level '" + fields[4] + "'");
            continue;
        }
        if (!parse_level(fields[5], kBinary, r.buzzfeed_bias)) {
            reject("unknown buzzfeed_bias level '" + fields[5] + "'");
            continue;
        }
        r.country = fields[6];
        if (!seen.insert(r.source_id).second) {
            reject("duplicate source_id: " + r.source_id);
            continue;
        }
        ratings.push_back(std::move(r));
    }
    if (rejected_out) *rejected_out = rejected;
    return ratings;
}

void credibility_score(const SourceRating& r, AggregateLabel& out) {
    double score = 0.0;
    if (r.newsguard) score += *r.newsguard == NewsGuardLabel::Green ? 1.0 : -1.0;
    if (r.mbfc_factual) score += factual_value(*r.mbfc_factual);
    out.credibility_score = score;
    if (!r.newsguard && !r.mbfc_factual)
        out.credibility = CredibilityLabel::Unknown;
    else if (score > 0.6)
        out.credibility = CredibilityLabel::Credible;
    else if (score < -0.6)
        out.credibility = CredibilityLabel::NotCredible;
    else
        out.credibility = CredibilityLabel::Unknown;
}

void bias_score(const SourceRating& r, AggregateLabel& out) {
    double score = 0.0;
    if (r.mbfc_bias) score += bias_value(*r.mbfc_bias);
    if (r.allsides_bias) score += bias_value(*r.allsides_bias);
    if (r.buzzfeed_bias) score += *r.buzzfeed_bias == BinaryBias::Left ? -1.0 : 1.0;
    out.bias_score = score;
    if (!r.mbfc_bias && !r.allsides_bias && !r.buzzfeed_bias)
        out.bias = BiasLabel::Unknown;
    else if (score <= -1.0)
        out.bias = BiasLabel::Left;
    else if (score >= 1.0)
        out.bias = BiasLabel::Right;
    else
        out.bias = BiasLabel::Center;
}

AggregateLabel aggregate(const SourceRating& r) {
    AggregateLabel out;
    out.source_id = r.source_id;
    credibility_score(r, out);
    bias_score(r, out);
    return out;
}

CommunityProfile community_profile(const Partition& partition,
                                   const std::vector<SourceRating>& ratings) {
    std::map<std::string, const SourceRating*> by_source;
    for (const SourceRating& r : ratings) by_source[r.source_id] = &r;

    CommunityProfile profile;
    profile.credibility.columns = {"Credible", "Not Credible", "Unknown"};
    profile.bias.columns = {"left", "center", "right", "unknown"};
    profile.country.columns = {"US", "RU", "UK", "unknown", "other"};

    auto bump = [](ProfileTable& t, std::uint32_t community, const std::string& col) {
        auto& row = t.rows[community];
        row.resize(t.columns.size(), 0);
        const auto it = std::find(t.columns.begin(), t.columns.end(), col);
        ++row[static_cast<std::size_t>(it - t.columns.begin())];
    };

    for (const auto& [source, community] : partition.assignment) {
        SourceRating blank;
        const auto it = by_source.find(source);
        const SourceRating& r = it != by_source.end() ? *it->second : blank;
        const AggregateLabel agg = aggregate(r);
        bump(profile.credibility, community, to_string(agg.credibility));
        bump(profile.bias, community, to_string(agg.bias));
        bump(profile.country, community, country_bucket(r.country));
    }
    return profile;
}

std::string to_string(CredibilityLabel l) {
    switch (l) {
        case CredibilityLabel::Credible: return "Credible";
        case CredibilityLabel::NotCredible: return "Not Credible";
        case CredibilityLabel::Unknown: return "Unknown";
    }
    return "Unknown";
}

std::string to_string(BiasLabel l) {
    switch (l) {
        case BiasLabel::Left: return "left";
        case BiasLabel::Center: return "center";
        case BiasLabel::Right: return "right";
        case BiasLabel::Unknown: return "unknown";
    }
    return "unknown";
}

}  // namespace csn
