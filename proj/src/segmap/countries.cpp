// Copyright 2026 The segmap Authors
// SPDX-License-Identifier: Apache-2.0

#include "segmap/countries.hpp"

#include <algorithm>
#include <array>
#include <string_view>

#include "segmap/text.hpp"

namespace segmap {
namespace {

struct Entry {
  std::string_view key;
  std::string_view name;
};

// Keys are lowercase, diacritic-folded, and sorted for binary search.
constexpr std::array<Entry, 240> kCountries = {{
    {"afghanistan", "Afghanistan"},
    {"albania", "Albania"},
    {"algeria", "Algeria"},
    {"america", "United States"},
    {"andorra", "Andorra"},
    {"angola", "Angola"},
    {"antigua and barbuda", "Antigua and Barbuda"},
    {"argentina", "Argentina"},
    {"armenia", "Armenia"},
    {"australia", "Australia"},
    {"austria", "Austria"},
    {"azerbaijan", "Azerbaijan"},
    {"bahamas", "Bahamas"},
    {"bahrain", "Bahrain"},
    {"bangladesh", "Bangladesh"},
    {"barbados", "Barbados"},
    {"belarus", "Belarus"},
    {"belgium", "Belgium"},
    {"belize", "Belize"},
    {"benin", "Benin"},
    {"bhutan", "Bhutan"},
    {"bolivia", "Bolivia"},
    {"bosnia and herzegovina", "Bosnia and Herzegovina"},
    {"botswana", "Botswana"},
    {"brasil", "Brazil"},
    {"brazil", "Brazil"},
    {"britain", "United Kingdom"},
    {"brunei", "Brunei Darussalam"},
    {"brunei darussalam", "Brunei Darussalam"},
    {"bulgaria", "Bulgaria"},
    {"burkina faso", "Burkina Faso"},
    {"burundi", "Burundi"},
    {"cambodia", "Cambodia"},
    {"cameroon", "Cameroon"},
    {"canada", "Canada"},
    {"cape verde", "Cape Verde"},
    {"central african republic", "Central African Republic"},
    {"chad", "Chad"},
    {"chile", "Chile"},
    {"china", "China"},
    {"colombia", "Colombia"},
    {"comoros", "Comoros"},
    {"congo", "Congo"},
    {"costa rica", "Costa Rica"},
    {"cote d'ivoire", "Cote d'Ivoire"},
    {"croatia", "Croatia"},
    {"cuba", "Cuba"},
    {"cyprus", "Cyprus"},
    {"czech republic", "Czech Republic"},
    {"czechia", "Czech Republic"},
    {"democratic republic congo", "Democratic Republic Congo"},
    {"democratic republic of the congo", "Democratic Republic Congo"},
    {"denmark", "Denmark"},
    {"deutschland", "Germany"},
    {"djibouti", "Djibouti"},
    {"dominica", "Dominica"},
    {"dominican republic", "Dominican Republic"},
    {"dr congo", "Democratic Republic Congo"},
    {"east timor", "Timor-Leste"},
    {"ecuador", "Ecuador"},
    {"egypt", "Egypt"},
    {"el salvador", "El Salvador"},
    {"england", "United Kingdom"},
    {"equatorial guinea", "Equatorial Guinea"},
    {"eritrea", "Eritrea"},
    {"espana", "Spain"},
    {"estonia", "Estonia"},
    {"eswatini", "Eswatini"},
    {"ethiopia", "Ethiopia"},
    {"fiji", "Fiji"},
    {"finland", "Finland"},
    {"france", "France"},
    {"gabon", "Gabon"},
    {"gambia", "Gambia"},
    {"georgia", "Georgia"},
    {"germany", "Germany"},
    {"ghana", "Ghana"},
    {"great britain", "United Kingdom"},
    {"greece", "Greece"},
    {"grenada", "Grenada"},
    {"guatemala", "Guatemala"},
    {"guinea", "Guinea"},
    {"guinea-bissau", "Guinea-Bissau"},
    {"guyana", "Guyana"},
    {"haiti", "Haiti"},
    {"holland", "Netherlands"},
    {"honduras", "Honduras"},
    {"hong kong", "Hong Kong"},
    {"hong kong sar", "Hong Kong"},
    {"hungary", "Hungary"},
    {"iceland", "Iceland"},
    {"india", "India"},
    {"indonesia", "Indonesia"},
    {"iran", "Iran"},
    {"iraq", "Iraq"},
    {"ireland", "Ireland"},
    {"israel", "Israel"},
    {"italy", "Italy"},
    {"ivory coast", "Cote d'Ivoire"},
    {"jamaica", "Jamaica"},
    {"japan", "Japan"},
    {"jordan", "Jordan"},
    {"kazakhstan", "Kazakhstan"},
    {"kenya", "Kenya"},
    {"kiribati", "Kiribati"},
    {"korea", "South Korea"},
    {"korea, republic of", "South Korea"},
    {"kosovo", "Kosovo"},
    {"kuwait", "Kuwait"},
    {"kyrgyzstan", "Kyrgyzstan"},
    {"laos", "Laos"},
    {"latvia", "Latvia"},
    {"lebanon", "Lebanon"},
    {"lesotho", "Lesotho"},
    {"liberia", "Liberia"},
    {"libya", "Libya"},
    {"liechtenstein", "Liechtenstein"},
    {"lithuania", "Lithuania"},
    {"luxembourg", "Luxembourg"},
    {"macao", "Macao"},
    {"macau", "Macao"},
    {"macedonia", "North Macedonia"},
    {"madagascar", "Madagascar"},
    {"malawi", "Malawi"},
    {"malaysia", "Malaysia"},
    {"maldives", "Maldives"},
    {"mali", "Mali"},
    {"malta", "Malta"},
    {"marshall islands", "Marshall Islands"},
    {"mauritania", "Mauritania"},
    {"mauritius", "Mauritius"},
    {"mexico", "Mexico"},
    {"mexico city", "Mexico"},
    {"micronesia", "Micronesia"},
    {"moldova", "Moldova"},
    {"monaco", "Monaco"},
    {"mongolia", "Mongolia"},
    {"montenegro", "Montenegro"},
    {"morocco", "Morocco"},
    {"mozambique", "Mozambique"},
    {"myanmar", "Myanmar"},
    {"namibia", "Namibia"},
    {"nauru", "Nauru"},
    {"nepal", "Nepal"},
    {"netherlands", "Netherlands"},
    {"new zealand", "New Zealand"},
    {"nicaragua", "Nicaragua"},
    {"niger", "Niger"},
    {"nigeria", "Nigeria"},
    {"north korea", "North Korea"},
    {"north macedonia", "North Macedonia"},
    {"northern ireland", "United Kingdom"},
    {"norway", "Norway"},
    {"oman", "Oman"},
    {"pakistan", "Pakistan"},
    {"palau", "Palau"},
    {"palestine", "Palestine"},
    {"panama", "Panama"},
    {"papua new guinea", "Papua New Guinea"},
    {"paraguay", "Paraguay"},
    {"people's republic of china", "China"},
    {"peru", "Peru"},
    {"philippines", "Philippines"},
    {"poland", "Poland"},
    {"portugal", "Portugal"},
    {"prc", "China"},
    {"puerto rico", "Puerto Rico"},
    {"qatar", "Qatar"},
    {"republic of korea", "South Korea"},
    {"romania", "Romania"},
    {"russia", "Russian Federation"},
    {"russian federation", "Russian Federation"},
    {"rwanda", "Rwanda"},
    {"saint kitts and nevis", "Saint Kitts and Nevis"},
    {"saint lucia", "Saint Lucia"},
    {"saint vincent and the grenadines", "Saint Vincent and the Grenadines"},
    {"samoa", "Samoa"},
    {"san marino", "San Marino"},
    {"sao tome and principe", "Sao Tome and Principe"},
    {"saudi arabia", "Saudi Arabia"},
    {"scotland", "United Kingdom"},
    {"senegal", "Senegal"},
    {"serbia", "Serbia"},
    {"seychelles", "Seychelles"},
    {"sierra leone", "Sierra Leone"},
    {"singapore", "Singapore"},
    {"slovakia", "Slovakia"},
    {"slovenia", "Slovenia"},
    {"solomon islands", "Solomon Islands"},
    {"somalia", "Somalia"},
    {"south africa", "South Africa"},
    {"south korea", "South Korea"},
    {"south sudan", "South Sudan"},
    {"spain", "Spain"},
    {"sri lanka", "Sri Lanka"},
    {"sudan", "Sudan"},
    {"suriname", "Suriname"},
    {"swaziland", "Eswatini"},
    {"sweden", "Sweden"},
    {"switzerland", "Switzerland"},
    {"syria", "Syrian Arab Republic"},
    {"syrian arab republic", "Syrian Arab Republic"},
    {"taiwan", "Taiwan"},
    {"tajikistan", "Tajikistan"},
    {"tanzania", "Tanzania"},
    {"thailand", "Thailand"},
    {"the netherlands", "Netherlands"},
    {"timor-leste", "Timor-Leste"},
    {"togo", "Togo"},
    {"tonga", "Tonga"},
    {"trinidad and tobago", "Trinidad and Tobago"},
    {"tunisia", "Tunisia"},
    {"turkey", "Turkey"},
    {"turkiye", "Turkey"},
    {"turkmenistan", "Turkmenistan"},
    {"tuvalu", "Tuvalu"},
    {"u.k.", "United Kingdom"},
    {"u.s.", "United States"},
    {"u.s.a", "United States"},
    {"u.s.a.", "United States"},
    {"uganda", "Uganda"},
    {"uk", "United Kingdom"},
    {"ukraine", "Ukraine"},
    {"united arab emirates", "United Arab Emirates"},
    {"united kingdom", "United Kingdom"},
    {"united states", "United States"},
    {"united states of america", "United States"},
    {"uruguay", "Uruguay"},
    {"us", "United States"},
    {"usa", "United States"},
    {"uzbekistan", "Uzbekistan"},
    {"vanuatu", "Vanuatu"},
    {"vatican city", "Vatican City"},
    {"venezuela", "Venezuela"},
    {"viet nam", "Viet Nam"},
    {"vietnam", "Viet Nam"},
    {"wales", "United Kingdom"},
    {"yemen", "Yemen"},
    {"zambia", "Zambia"},
    {"zimbabwe", "Zimbabwe"},
}};

}  // namespace

std::optional<std::string> match_country(std::string_view segment) {
  auto key = fold_lower(trim(segment));
  while (!key.empty() && (key.back() == '.' || key.back() == ')')) {
    if (key == "u.s." || key == "u.k." || key == "u.s.a.") break;
    key.pop_back();
  }
  auto it = std::lower_bound(kCountries.begin(), kCountries.end(), key,
                             [](const Entry& e, const std::string& k) { return e.key < k; });
  if (it != kCountries.end() && it->key == key) return std::string(it->name);
  return std::nullopt;
}

std::optional<std::string> country_of_affiliation(std::string_view affiliation) {
  auto comma = affiliation.rfind(',');
  auto tail = comma == std::string_view::npos ? affiliation : affiliation.substr(comma + 1);
  return match_country(tail);
}

}  // namespace segmap
