#ifndef CSN_RATINGS_HPP
#define CSN_RATINGS_HPP

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "csn/community.hpp"

namespace csn {

enum class NewsGuardLabel { Green, Red };

// MBFC factual-reporting ladder, best to worst.
enum class FactualLevel { VeryHigh, High, MostlyFactual, Mixed, Low, VeryLow };

// Five-level political bias scale, left to right (MBFC and AllSides).
enum class BiasLevel { Left, LeftCenter, Center, RightCenter, Right };

enum class BinaryBias { Left, Right };

struct SourceRating {
    std::string source_id;
    std::optional<NewsGuardLabel> newsguard;
    std::optional<FactualLevel> mbfc_factual;
    std::optional<BiasLevel> mbfc_bias;
    std::optional<BiasLevel> allsides_bias;
    std::optional<BinaryBias> buzzfeed_bias;
    std::string country;  // ISO code, empty = unknown
};

enum class CredibilityLabel { Credible, NotCredible, Unknown };
enum class BiasLabel { Left, Center, Right, Unknown };

struct AggregateLabel {
    std::string source_id;
    double credibility_score = 0.0;  // in [-2, 2]
    CredibilityLabel credibility = CredibilityLabel::Unknown;
    double bias_score = 0.0;  // in [-3, 3]
    BiasLabel bias = BiasLabel::Unknown;
};

// Per-community count/percentage rows for one categorical axis.
struct ProfileTable {
    std::vector<std::string> columns;
    // community label -> counts per column (parallel to `columns`)
    std::map<std::uint32_t, std::vector<std::size_t>> rows;
};

struct CommunityProfile {
    ProfileTable credibility;
    ProfileTable bias;
    ProfileTable country;  // US / RU / UK / unknown / other
};

// Loads a TSV ratings table with header
//   source_id newsguard mbfc_factual mbfc_bias allsides_bias buzzfeed_bias country
// Empty fields mean "absent". Records with unrecognized levels or duplicate
// source_ids are rejected with a diagnostic line carrying the line number.
std::vector<SourceRating> load_ratings(const std::string& path,
                                       std::ostream& diagnostics,
                                       std::size_t* rejected = nullptr);

// NewsGuard green -> +1, red -> -1; MBFC factual mapped onto a symmetric
// [-1, 1] ladder; absent -> 0. Label Credible above 0.6, Not Credible below
// -0.6 (both strict); both inputs absent forces Unknown regardless of score.
void credibility_score(const SourceRating& r, AggregateLabel& out);

// MBFC/AllSides five levels -> {-1, -0.5, 0, +0.5, +1}, BuzzFeed -> {-1, +1},
// absent -> 0. score <= -1 is left, score >= 1 is right (both inclusive);
// all three absent forces unknown.
void bias_score(const SourceRating& r, AggregateLabel& out);

AggregateLabel aggregate(const SourceRating& r);

// Profiles each community; sources without a rating record count as fully
// unknown on every axis.
CommunityProfile community_profile(const Partition& partition,
                                   const std::vector<SourceRating>& ratings);

std::string to_string(CredibilityLabel l);
std::string to_string(BiasLabel l);

}  // namespace csn

#endif
