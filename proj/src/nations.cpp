#include "areal/nations.hpp"

#include <array>

#include "areal/error.hpp"
#include "areal/text.hpp"

namespace areal {
namespace {

// ISO 3166-1 alpha-3 codes with lowercase English short names.
constexpr std::array<Nation, 249> kNations{{
    {"abw", "aruba"},
    {"afg", "afghanistan"},
    {"ago", "angola"},
    {"aia", "anguilla"},
    {"ala", "åland"},
    {"alb", "albania"},
    {"and", "andorra"},
    {"are", "united arab emirates"},
    {"arg", "argentina"},
    {"arm", "armenia"},
    {"asm", "american samoa"},
    {"ata", "antarctica"},
    {"atf", "french southern territories"},
    {"atg", "antigua and barbuda"},
    {"aus", "australia"},
    {"aut", "austria"},
    {"aze", "azerbaijan"},
    {"bdi", "burundi"},
    {"bel", "belgium"},
    {"ben", "benin"},
    {"bes", "bonaire, sint eustatius and saba"},
    {"bfa", "burkina faso"},
    {"bgd", "bangladesh"},
    {"bgr", "bulgaria"},
    {"bhr", "bahrain"},
    {"bhs", "bahamas"},
    {"bih", "bosnia and herzegovina"},
    {"blm", "saint barthélemy"},
    {"blr", "belarus"},
    {"blz", "belize"},
    {"bmu", "bermuda"},
    {"bol", "bolivia"},
    {"bra", "brazil"},
    {"brb", "barbados"},
    {"brn", "brunei"},
    {"btn", "bhutan"},
    {"bvt", "bouvet island"},
    {"bwa", "botswana"},
    {"caf", "central african republic"},
    {"can", "canada"},
    {"cck", "cocos islands"},
    {"che", "switzerland"},
    {"chl", "chile"},
    {"chn", "china"},
    {"civ", "côte d'ivoire"},
    {"cmr", "cameroon"},
    {"cod", "democratic republic of the congo"},
    {"cog", "republic of congo"},
    {"cok", "cook islands"},
    {"col", "colombia"},
    {"com", "comoros"},
    {"cpv", "cape verde"},
    {"cri", "costa rica"},
    {"cub", "cuba"},
    {"cuw", "curaçao"},
    {"cxr", "christmas island"},
    {"cym", "cayman islands"},
    {"cyp", "cyprus"},
    {"cze", "czechia"},
    {"deu", "germany"},
    {"dji", "djibouti"},
    {"dma", "dominica"},
    {"dnk", "denmark"},
    {"dom", "dominican republic"},
    {"dza", "algeria"},
    {"ecu", "ecuador"},
    {"egy", "egypt"},
    {"eri", "eritrea"},
    {"esh", "western sahara"},
    {"esp", "spain"},
    {"est", "estonia"},
    {"eth", "ethiopia"},
    {"fin", "finland"},
    {"fji", "fiji"},
    {"flk", "falkland islands"},
    {"fra", "france"},
    {"fro", "faroe islands"},
    {"fsm", "micronesia"},
    {"gab", "gabon"},
    {"gbr", "united kingdom"},
    {"geo", "georgia"},
    {"ggy", "guernsey"},
    {"gha", "ghana"},
    {"gib", "gibraltar"},
    {"gin", "guinea"},
    {"glp", "guadeloupe"},
    {"gmb", "gambia"},
    {"gnb", "guinea-bissau"},
    {"gnq", "equatorial guinea"},
    {"grc", "greece"},
    {"grd", "grenada"},
    {"grl", "greenland"},
    {"gtm", "guatemala"},
    {"guf", "french guiana"},
    {"gum", "guam"},
    {"guy", "guyana"},
    {"hkg", "hong kong"},
    {"hmd", "heard island and mcdonald islands"},
    {"hnd", "honduras"},
    {"hrv", "croatia"},
    {"hti", "haiti"},
    {"hun", "hungary"},
    {"idn", "indonesia"},
    {"imn", "isle of man"},
    {"ind", "india"},
    {"iot", "british indian ocean territory"},
    {"irl", "ireland"},
    {"irn", "iran"},
    {"irq", "iraq"},
    {"isl", "iceland"},
    {"isr", "israel"},
    {"ita", "italy"},
    {"jam", "jamaica"},
    {"jey", "jersey"},
    {"jor", "jordan"},
    {"jpn", "japan"},
    {"kaz", "kazakhstan"},
    {"ken", "kenya"},
    {"kgz", "kyrgyzstan"},
    {"khm", "cambodia"},
    {"kir", "kiribati"},
    {"kna", "saint kitts and nevis"},
    {"kor", "south korea"},
    {"kwt", "kuwait"},
    {"lao", "laos"},
    {"lbn", "lebanon"},
    {"lbr", "liberia"},
    {"lby", "libya"},
    {"lca", "saint lucia"},
    {"lie", "liechtenstein"},
    {"lka", "sri lanka"},
    {"lso", "lesotho"},
    {"ltu", "lithuania"},
    {"lux", "luxembourg"},
    {"lva", "latvia"},
    {"mac", "macao"},
    {"maf", "saint-martin"},
    {"mar", "morocco"},
    {"mco", "monaco"},
    {"mda", "moldova"},
    {"mdg", "madagascar"},
    {"mdv", "maldives"},
    {"mex", "mexico"},
    {"mhl", "marshall islands"},
    {"mkd", "north macedonia"},
    {"mli", "mali"},
    {"mlt", "malta"},
    {"mmr", "myanmar"},
    {"mne", "montenegro"},
    {"mng", "mongolia"},
    {"mnp", "northern mariana islands"},
    {"moz", "mozambique"},
    {"mrt", "mauritania"},
    {"msr", "montserrat"},
    {"mtq", "martinique"},
    {"mus", "mauritius"},
    {"mwi", "malawi"},
    {"mys", "malaysia"},
    {"myt", "mayotte"},
    {"nam", "namibia"},
    {"ncl", "new caledonia"},
    {"ner", "niger"},
    {"nfk", "norfolk island"},
    {"nga", "nigeria"},
    {"nic", "nicaragua"},
    {"niu", "niue"},
    {"nld", "netherlands"},
    {"nor", "norway"},
    {"npl", "nepal"},
    {"nru", "nauru"},
    {"nzl", "new zealand"},
    {"omn", "oman"},
    {"pak", "pakistan"},
    {"pan", "panama"},
    {"pcn", "pitcairn"},
    {"per", "peru"},
    {"phl", "philippines"},
    {"plw", "palau"},
    {"png", "papua new guinea"},
    {"pol", "poland"},
    {"pri", "puerto rico"},
    {"prk", "north korea"},
    {"prt", "portugal"},
    {"pry", "paraguay"},
    {"pse", "palestine"},
    {"pyf", "french polynesia"},
    {"qat", "qatar"},
    {"reu", "réunion"},
    {"rou", "romania"},
    {"rus", "russia"},
    {"rwa", "rwanda"},
    {"sau", "saudi arabia"},
    {"sdn", "sudan"},
    {"sen", "senegal"},
    {"sgp", "singapore"},
    {"sgs", "south georgia and the south sandwich islands"},
    {"shn", "saint helena"},
    {"sjm", "svalbard and jan mayen"},
    {"slb", "solomon islands"},
    {"sle", "sierra leone"},
    {"slv", "el salvador"},
    {"smr", "san marino"},
    {"som", "somalia"},
    {"spm", "saint pierre and miquelon"},
    {"srb", "serbia"},
    {"ssd", "south sudan"},
    {"stp", "sao tome and principe"},
    {"sur", "suriname"},
    {"svk", "slovakia"},
    {"svn", "slovenia"},
    {"swe", "sweden"},
    {"swz", "eswatini"},
    {"sxm", "sint maarten"},
    {"syc", "seychelles"},
    {"syr", "syria"},
    {"tca", "turks and caicos islands"},
    {"tcd", "chad"},
    {"tgo", "togo"},
    {"tha", "thailand"},
    {"tjk", "tajikistan"},
    {"tkl", "tokelau"},
    {"tkm", "turkmenistan"},
    {"tls", "timor-leste"},
    {"ton", "tonga"},
    {"tto", "trinidad and tobago"},
    {"tun", "tunisia"},
    {"tur", "turkey"},
    {"tuv", "tuvalu"},
    {"twn", "taiwan"},
    {"tza", "tanzania"},
    {"uga", "uganda"},
    {"ukr", "ukraine"},
    {"umi", "united states minor outlying islands"},
    {"ury", "uruguay"},
    {"usa", "united states of america"},
    {"uzb", "uzbekistan"},
    {"vat", "vatican city"},
    {"vct", "saint vincent and the grenadines"},
    {"ven", "venezuela"},
    {"vgb", "british virgin islands"},
    {"vir", "virgin islands, u.s."},
    {"vnm", "vietnam"},
    {"vut", "vanuatu"},
    {"wlf", "wallis and futuna"},
    {"wsm", "samoa"},
    {"yem", "yemen"},
    {"zaf", "south africa"},
    {"zmb", "zambia"},
    {"zwe", "zimbabwe"},
}};

}  // namespace

std::span<const Nation> allNations() { return kNations; }

std::optional<Nation> findNation(std::string_view token) {
  const auto key = text::matchKey(token);
  for (const auto& n : kNations)
    if (key == n.iso3 || key == text::matchKey(n.name)) return n;
  return std::nullopt;
}

Nation requireNation(std::string_view token) {
  if (token == kGlobalNation) return Nation{kGlobalNation, kGlobalNation};
  if (auto n = findNation(token)) return *n;
  throw Error(Errc::UnknownNation, "unknown nation '" + std::string(token) + "'");
}

std::string nationFileStem(std::string_view name) {
  if (const auto n = findNation(name)) return std::string(n->name);
  return text::matchKey(name);
}

}  // namespace areal
