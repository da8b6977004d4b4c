// ISO-3166 country metadata and admin1 code tables. Generated from
// data/countries.tsv; keep the two in sync when editing.

#include "geoloc/gazetteer.hpp"

#include <algorithm>
#include <array>

namespace geoloc::gaz {

namespace {

constexpr std::array<CountryInfo, 221> kCountries = {{
    {"ad", "andorra", "europe"},
    {"ae", "united arab emirates", "asia"},
    {"af", "afghanistan", "asia"},
    {"ag", "antigua and barbuda", "north america"},
    {"ai", "anguilla", "north america"},
    {"al", "albania", "europe"},
    {"am", "armenia", "asia"},
    {"ao", "angola", "africa"},
    {"aq", "antarctica", "antarctica"},
    {"ar", "argentina", "south america"},
    {"as", "american samoa", "oceania"},
    {"at", "austria", "europe"},
    {"au", "australia", "oceania"},
    {"aw", "aruba", "north america"},
    {"az", "azerbaijan", "asia"},
    {"ba", "bosnia and herzegovina", "europe"},
    {"bb", "barbados", "north america"},
    {"bd", "bangladesh", "asia"},
    {"be", "belgium", "europe"},
    {"bf", "burkina faso", "africa"},
    {"bg", "bulgaria", "europe"},
    {"bh", "bahrain", "asia"},
    {"bi", "burundi", "africa"},
    {"bj", "benin", "africa"},
    {"bm", "bermuda", "north america"},
    {"bn", "brunei", "asia"},
    {"bo", "bolivia", "south america"},
    {"br", "brazil", "south america"},
    {"bs", "bahamas", "north america"},
    {"bt", "bhutan", "asia"},
    {"bw", "botswana", "africa"},
    {"by", "belarus", "europe"},
    {"bz", "belize", "north america"},
    {"ca", "canada", "north america"},
    {"cd", "democratic republic of the congo", "africa"},
    {"cf", "central african republic", "africa"},
    {"cg", "republic of the congo", "africa"},
    {"ch", "switzerland", "europe"},
    {"ci", "ivory coast", "africa"},
    {"ck", "cook islands", "oceania"},
    {"cl", "chile", "south america"},
    {"cm", "cameroon", "africa"},
    {"cn", "china", "asia"},
    {"co", "colombia", "south america"},
    {"cr", "costa rica", "north america"},
    {"cu", "cuba", "north america"},
    {"cv", "cape verde", "africa"},
    {"cy", "cyprus", "europe"},
    {"cz", "czechia", "europe"},
    {"de", "germany", "europe"},
    {"dj", "djibouti", "africa"},
    {"dk", "denmark", "europe"},
    {"dm", "dominica", "north america"},
    {"do", "dominican republic", "north america"},
    {"dz", "algeria", "africa"},
    {"ec", "ecuador", "south america"},
    {"ee", "estonia", "europe"},
    {"eg", "egypt", "africa"},
    {"er", "eritrea", "africa"},
    {"es", "spain", "europe"},
    {"et", "ethiopia", "africa"},
    {"fi", "finland", "europe"},
    {"fj", "fiji", "oceania"},
    {"fm", "micronesia", "oceania"},
    {"fo", "faroe islands", "europe"},
    {"fr", "france", "europe"},
    {"ga", "gabon", "africa"},
    {"gb", "united kingdom", "europe"},
    {"gd", "grenada", "north america"},
    {"ge", "georgia", "asia"},
    {"gf", "french guiana", "south america"},
    {"gh", "ghana", "africa"},
    {"gi", "gibraltar", "europe"},
    {"gl", "greenland", "north america"},
    {"gm", "gambia", "africa"},
    {"gn", "guinea", "africa"},
    {"gp", "guadeloupe", "north america"},
    {"gq", "equatorial guinea", "africa"},
    {"gr", "greece", "europe"},
    {"gt", "guatemala", "north america"},
    {"gu", "guam", "oceania"},
    {"gw", "guinea-bissau", "africa"},
    {"gy", "guyana", "south america"},
    {"hk", "hong kong", "asia"},
    {"hn", "honduras", "north america"},
    {"hr", "croatia", "europe"},
    {"ht", "haiti", "north america"},
    {"hu", "hungary", "europe"},
    {"id", "indonesia", "asia"},
    {"ie", "ireland", "europe"},
    {"il", "israel", "asia"},
    {"in", "india", "asia"},
    {"iq", "iraq", "asia"},
    {"ir", "iran", "asia"},
    {"is", "iceland", "europe"},
    {"it", "italy", "europe"},
    {"jm", "jamaica", "north america"},
    {"jo", "jordan", "asia"},
    {"jp", "japan", "asia"},
    {"ke", "kenya", "africa"},
    {"kg", "kyrgyzstan", "asia"},
    {"kh", "cambodia", "asia"},
    {"ki", "kiribati", "oceania"},
    {"km", "comoros", "africa"},
    {"kn", "saint kitts and nevis", "north america"},
    {"kp", "north korea", "asia"},
    {"kr", "south korea", "asia"},
    {"kw", "kuwait", "asia"},
    {"ky", "cayman islands", "north america"},
    {"kz", "kazakhstan", "asia"},
    {"la", "laos", "asia"},
    {"lb", "lebanon", "asia"},
    {"lc", "saint lucia", "north america"},
    {"li", "liechtenstein", "europe"},
    {"lk", "sri lanka", "asia"},
    {"lr", "liberia", "africa"},
    {"ls", "lesotho", "africa"},
    {"lt", "lithuania", "europe"},
    {"lu", "luxembourg", "europe"},
    {"lv", "latvia", "europe"},
    {"ly", "libya", "africa"},
    {"ma", "morocco", "africa"},
    {"mc", "monaco", "europe"},
    {"md", "moldova", "europe"},
    {"me", "montenegro", "europe"},
    {"mg", "madagascar", "africa"},
    {"mh", "marshall islands", "oceania"},
    {"mk", "north macedonia", "europe"},
    {"ml", "mali", "africa"},
    {"mm", "myanmar", "asia"},
    {"mn", "mongolia", "asia"},
    {"mo", "macau", "asia"},
    {"mq", "martinique", "north america"},
    {"mr", "mauritania", "africa"},
    {"mt", "malta", "europe"},
    {"mu", "mauritius", "africa"},
    {"mv", "maldives", "asia"},
    {"mw", "malawi", "africa"},
    {"mx", "mexico", "north america"},
    {"my", "malaysia", "asia"},
    {"mz", "mozambique", "africa"},
    {"na", "namibia", "africa"},
    {"nc", "new caledonia", "oceania"},
    {"ne", "niger", "africa"},
    {"ng", "nigeria", "africa"},
    {"ni", "nicaragua", "north america"},
    {"nl", "netherlands", "europe"},
    {"no", "norway", "europe"},
    {"np", "nepal", "asia"},
    {"nr", "nauru", "oceania"},
    {"nu", "niue", "oceania"},
    {"nz", "new zealand", "oceania"},
    {"om", "oman", "asia"},
    {"pa", "panama", "north america"},
    {"pe", "peru", "south america"},
    {"pf", "french polynesia", "oceania"},
    {"pg", "papua new guinea", "oceania"},
    {"ph", "philippines", "asia"},
    {"pk", "pakistan", "asia"},
    {"pl", "poland", "europe"},
    {"pr", "puerto rico", "north america"},
    {"ps", "palestine", "asia"},
    {"pt", "portugal", "europe"},
    {"pw", "palau", "oceania"},
    {"py", "paraguay", "south america"},
    {"qa", "qatar", "asia"},
    {"re", "reunion", "africa"},
    {"ro", "romania", "europe"},
    {"rs", "serbia", "europe"},
    {"ru", "russia", "europe"},
    {"rw", "rwanda", "africa"},
    {"sa", "saudi arabia", "asia"},
    {"sb", "solomon islands", "oceania"},
    {"sc", "seychelles", "africa"},
    {"sd", "sudan", "africa"},
    {"se", "sweden", "europe"},
    {"sg", "singapore", "asia"},
    {"si", "slovenia", "europe"},
    {"sk", "slovakia", "europe"},
    {"sl", "sierra leone", "africa"},
    {"sm", "san marino", "europe"},
    {"sn", "senegal", "africa"},
    {"so", "somalia", "africa"},
    {"sr", "suriname", "south america"},
    {"ss", "south sudan", "africa"},
    {"st", "sao tome and principe", "africa"},
    {"sv", "el salvador", "north america"},
    {"sy", "syria", "asia"},
    {"sz", "eswatini", "africa"},
    {"td", "chad", "africa"},
    {"tg", "togo", "africa"},
    {"th", "thailand", "asia"},
    {"tj", "tajikistan", "asia"},
    {"tk", "tokelau", "oceania"},
    {"tl", "timor-leste", "asia"},
    {"tm", "turkmenistan", "asia"},
    {"tn", "tunisia", "africa"},
    {"to", "tonga", "oceania"},
    {"tr", "turkey", "asia"},
    {"tt", "trinidad and tobago", "north america"},
    {"tv", "tuvalu", "oceania"},
    {"tw", "taiwan", "asia"},
    {"tz", "tanzania", "africa"},
    {"ua", "ukraine", "europe"},
    {"ug", "uganda", "africa"},
    {"us", "united states", "north america"},
    {"uy", "uruguay", "south america"},
    {"uz", "uzbekistan", "asia"},
    {"va", "vatican city", "europe"},
    {"vc", "saint vincent and the grenadines", "north america"},
    {"ve", "venezuela", "south america"},
    {"vg", "british virgin islands", "north america"},
    {"vi", "us virgin islands", "north america"},
    {"vn", "vietnam", "asia"},
    {"vu", "vanuatu", "oceania"},
    {"ws", "samoa", "oceania"},
    {"ye", "yemen", "asia"},
    {"yt", "mayotte", "africa"},
    {"za", "south africa", "africa"},
    {"zm", "zambia", "africa"},
    {"zw", "zimbabwe", "africa"},
}};

struct Admin1Code {
    std::string_view country;  // ISO code
    std::string_view code;
    std::string_view name;
};

// US postal codes, Canadian numeric codes, GB constituent countries.
constexpr std::array<Admin1Code, 72> kAdmin1 = {{
    {"us", "al", "alabama"},
    {"us", "ak", "alaska"},
    {"us", "az", "arizona"},
    {"us", "ar", "arkansas"},
    {"us", "ca", "california"},
    {"us", "co", "colorado"},
    {"us", "ct", "connecticut"},
    {"us", "de", "delaware"},
    {"us", "fl", "florida"},
    {"us", "ga", "georgia"},
    {"us", "hi", "hawaii"},
    {"us", "id", "idaho"},
    {"us", "il", "illinois"},
    {"us", "in", "indiana"},
    {"us", "ia", "iowa"},
    {"us", "ks", "kansas"},
    {"us", "ky", "kentucky"},
    {"us", "la", "louisiana"},
    {"us", "me", "maine"},
    {"us", "md", "maryland"},
    {"us", "ma", "massachusetts"},
    {"us", "mi", "michigan"},
    {"us", "mn", "minnesota"},
    {"us", "ms", "mississippi"},
    {"us", "mo", "missouri"},
    {"us", "mt", "montana"},
    {"us", "ne", "nebraska"},
    {"us", "nv", "nevada"},
    {"us", "nh", "new hampshire"},
    {"us", "nj", "new jersey"},
    {"us", "nm", "new mexico"},
    {"us", "ny", "new york"},
    {"us", "nc", "north carolina"},
    {"us", "nd", "north dakota"},
    {"us", "oh", "ohio"},
    {"us", "ok", "oklahoma"},
    {"us", "or", "oregon"},
    {"us", "pa", "pennsylvania"},
    {"us", "ri", "rhode island"},
    {"us", "sc", "south carolina"},
    {"us", "sd", "south dakota"},
    {"us", "tn", "tennessee"},
    {"us", "tx", "texas"},
    {"us", "ut", "utah"},
    {"us", "vt", "vermont"},
    {"us", "va", "virginia"},
    {"us", "wa", "washington"},
    {"us", "wv", "west virginia"},
    {"us", "wi", "wisconsin"},
    {"us", "wy", "wyoming"},
    {"us", "dc", "district of columbia"},
    {"us", "pr", "puerto rico"},
    {"ca", "01", "alberta"},
    {"ca", "02", "british columbia"},
    {"ca", "03", "manitoba"},
    {"ca", "04", "new brunswick"},
    {"ca", "05", "newfoundland and labrador"},
    {"ca", "07", "nova scotia"},
    {"ca", "08", "ontario"},
    {"ca", "09", "prince edward island"},
    {"ca", "10", "quebec"},
    {"ca", "11", "saskatchewan"},
    {"ca", "12", "yukon"},
    {"ca", "13", "northwest territories"},
    {"ca", "14", "nunavut"},
    {"ca", "nt", "northwest territories"},
    {"ca", "nu", "nunavut"},
    {"ca", "on", "ontario"},
    {"gb", "eng", "england"},
    {"gb", "sct", "scotland"},
    {"gb", "wls", "wales"},
    {"gb", "nir", "northern ireland"},
}};

}  // namespace

const CountryInfo* country_by_code(std::string_view code) {
    auto it = std::find_if(kCountries.begin(), kCountries.end(),
                           [&](const CountryInfo& c) { return c.code == code; });
    return it == kCountries.end() ? nullptr : &*it;
}

const CountryInfo* country_by_name(std::string_view name) {
    auto it = std::find_if(kCountries.begin(), kCountries.end(),
                           [&](const CountryInfo& c) { return c.name == name; });
    return it == kCountries.end() ? nullptr : &*it;
}

std::string normalize_admin1(std::string_view country_code, std::string_view admin1) {
    for (const Admin1Code& a : kAdmin1) {
        if (a.country == country_code && a.code == admin1) return std::string(a.name);
    }
    return std::string(admin1);
}

}  // namespace geoloc::gaz
