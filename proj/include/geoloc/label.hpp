// Offline geocoding of extracted mentions (region-bias filter plus
// population prior), per-user ground-truth aggregation, and
// representative-coordinate assignment.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "geoloc/extract.hpp"
#include "geoloc/gazetteer.hpp"
#include "geoloc/geo.hpp"

namespace geoloc::label {

// per-subreddit geographic scope used to disambiguate shared place names
struct RegionBias {
    std::map<std::string, std::string> scopes;  // subreddit -> state/country name

    const std::string* scope_for(std::string_view subreddit) const;
};

RegionBias load_region_bias(const std::string& path);

struct ResolvedLocation {
    gaz::LocationHierarchy hierarchy;
    geo::GeoPoint coords;
    int confidence_rank = 1;  // 1 = best candidate before bias filtering
};

// Geocoder interface; the default implementation is the offline
// gazetteer resolver below. An external client can be plugged in.
class Geocoder {
public:
    virtual ~Geocoder() = default;
    virtual ResolvedLocation resolve(const extract::LocationMention& mention,
                                     const std::string* bias_scope) const = 0;
};

class GazetteerGeocoder final : public Geocoder {
public:
    explicit GazetteerGeocoder(const gaz::Gazetteer& g) : g_(g) {}
    ResolvedLocation resolve(const extract::LocationMention& mention,
                             const std::string* bias_scope) const override;

private:
    const gaz::Gazetteer& g_;
};

// Throws std::runtime_error("unresolvable mention") when no candidate
// survives at any level.
ResolvedLocation resolve(const extract::LocationMention& m,
                         const std::string* bias_scope, const gaz::Gazetteer& g);

struct Extraction {
    extract::Comment comment;
    extract::LocationMention mention;
    ResolvedLocation resolved;
};

struct Evidence {
    std::string comment_id;
    extract::LocationMention mention;
    ResolvedLocation resolved;
};

struct UserLabel {
    std::string user;
    gaz::LocationHierarchy hierarchy;
    gaz::Resolution resolution = gaz::Resolution::none;
    geo::GeoPoint coords;
    std::int64_t label_utc = 0;  // latest evidence comment timestamp
    std::vector<Evidence> evidence;
};

// Ground truth = deepest hierarchy prefix shared by every resolved
// location. nullopt when the evidence shares no prefix (user dropped).
// The gazetteer, when given, provides provisional coordinates for
// labels coarser than city level.
std::optional<UserLabel> aggregate_user(std::span<const Extraction> extractions,
                                        const gaz::Gazetteer* g = nullptr);

// City labels keep their coordinates; each coarser label moves to the
// geodesic median of the city-resolution users under its node. Nodes
// with no city members keep their gazetteer representative point.
void assign_coordinates(std::vector<UserLabel>& labels);

struct LabelStats {
    std::size_t comments_total = 0;
    std::size_t comments_in_seeds = 0;
    std::size_t comments_kept = 0;
    std::size_t mentions_found = 0;
    std::size_t mentions_unresolvable = 0;
    std::size_t users_seen = 0;
    std::size_t users_labeled = 0;
    std::size_t users_dropped_no_mentions = 0;
    std::size_t users_dropped_inconsistent = 0;
};

struct LabelResult {
    std::vector<UserLabel> labels;  // sorted by user
    LabelStats stats;
};

LabelResult label_corpus(std::span<const extract::Comment> comments,
                         const std::set<std::string>& seeds,
                         const gaz::Gazetteer& g, const gaz::AbbreviationTable& a,
                         const RegionBias& bias, int threads = 0);

}  // namespace geoloc::label
