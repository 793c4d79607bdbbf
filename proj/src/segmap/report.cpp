// Copyright 2026 The segmap Authors
// SPDX-License-Identifier: Apache-2.0

#include "segmap/report.hpp"

#include <algorithm>

#include "segmap/error.hpp"

namespace segmap {

using nlohmann::json;

MetricsOptions MetricsOptions::from_json(const json& j) {
  MetricsOptions o;
  if (j.is_null()) return o;
  if (j.contains("positions") && !j["positions"].is_null()) {
    o.positions = PositionLexicon::load(j["positions"].get<std::string>());
  }
  o.discipline_universe = j.value("discipline_universe", o.discipline_universe);
  o.moving_average_window = j.value("moving_average_window", o.moving_average_window);
  if (o.discipline_universe < 2) throw Error(ErrorKind::invalid_argument, "discipline_universe must be >= 2");
  if (o.moving_average_window < 1) throw Error(ErrorKind::invalid_argument, "moving_average_window must be >= 1");
  return o;
}

json series_to_json(const YearSeries& s) {
  json out = json::array();
  for (const auto& [y, v] : s.points()) out.push_back({y, v});
  return out;
}

YearSeries series_from_json(const json& j) {
  std::vector<std::pair<int, double>> pts;
  for (const auto& p : j) pts.emplace_back(p.at(0).get<int>(), p.at(1).get<double>());
  return YearSeries(std::move(pts));
}

namespace {

template <class Fn>
json attempt(json& notes, const std::string& name, Fn fn) {
  try {
    return fn();
  } catch (const Error& e) {
    notes[name] = e.what();
    return nullptr;
  }
}

json fit_json(const YearSeries& s, json& notes, const std::string& name) {
  return attempt(notes, name, [&]() -> json {
    auto f = exp_fit(s);
    return {{"a", f.a}, {"b", f.b}, {"r2", f.r2}};
  });
}

}  // namespace

json metrics_report(const CandidateSet& forms, const CorpusStore& store, const MetricsOptions& opt) {
  json notes = json::object();
  json series = json::object();
  const auto per_year = forms_per_year(forms, store);
  const auto new_per_year = new_forms_per_year(forms);
  series["forms_per_year"] = series_to_json(per_year);
  series["new_forms_per_year"] = series_to_json(new_per_year);
  json diversity = attempt(notes, "diversity", [&]() -> json {
    auto d = diversity_per_year(forms, store);
    series["diversity_moving_average"] = series_to_json(moving_average(d, opt.moving_average_window));
    return series_to_json(d);
  });
  series["diversity"] = diversity;
  auto multi = multidisciplinarity_per_year(forms, store);
  series["multidisciplinarity"] = series_to_json(multi);
  series["multidisciplinarity_moving_average"] = series_to_json(moving_average(multi, opt.moving_average_window));

  json fits = {{"forms_per_year", fit_json(per_year, notes, "fit_forms_per_year")},
               {"new_forms_per_year", fit_json(new_per_year, notes, "fit_new_forms_per_year")}};
  json growth = {
      {"forms_per_year", attempt(notes, "growth_forms_per_year", [&]() -> json { return annual_growth_rate(per_year); })},
      {"new_forms_per_year",
       attempt(notes, "growth_new_forms_per_year", [&]() -> json { return annual_growth_rate(new_per_year); })}};

  int latest = 0;
  for (const auto& r : store.records()) latest = std::max(latest, r.year);

  std::map<std::string, std::size_t> class_counts = {
      {"same_as_origin", 0}, {"different_from_origin", 0}, {"multiple_dominant", 0}, {"no_data", 0}};
  std::optional<IntersectionalityResult> inter;
  if (opt.positions) {
    inter = intersectionality(forms, store, *opt.positions);
  } else {
    notes["intersectionality"] = "no position lexicon configured";
  }

  json per_form = json::array();
  for (std::size_t i = 0; i < forms.size(); ++i) {
    const auto& f = forms[i];
    auto cls = classify_origin_vs_dominant(f, store);
    ++class_counts[std::string(to_string(cls))];
    json row = {{"term", f.term()},
                {"first_year", f.first_year},
                {"n_docs", f.doc_set.size()},
                {"origin_discipline", f.origin_discipline ? json(*f.origin_discipline) : json(nullptr)},
                {"origin_class", to_string(cls)}};
    auto dom = dominant_discipline(f, store);
    row["dominant_discipline"] = dom ? json(*dom) : json(nullptr);
    row["transdisciplinarity"] = cls == OriginClass::no_data
                                     ? json(nullptr)
                                     : json(transdisciplinarity_of_form(f, store, latest, opt.discipline_universe));
    if (inter) {
      row["positions"] = opt.positions->categories_of(f);
      row["intersectional"] = static_cast<bool>(inter->intersectional_form[i]);
    }
    per_form.push_back(std::move(row));
  }

  json inter_json = nullptr;
  if (inter) {
    series["intersectional_cooccurrences"] = series_to_json(inter->co_counts);
    series["intersectionality_entropy"] = series_to_json(inter->entropy);
    json pairs = json::object();
    for (const auto& [y, bins] : inter->pair_counts) pairs[std::to_string(y)] = bins;
    inter_json = {{"intersectional_forms", std::count(inter->intersectional_form.begin(),
                                                      inter->intersectional_form.end(), true)},
                  {"intersectional_works", inter->intersectional_works.size()},
                  {"pair_counts", pairs}};
  }

  auto prec = trigram_precedence_stats(forms, cooccurrence_first_years(forms, store));
  json precedence = {{"qualifying_trigrams", prec.qualifying},
                     {"after_bigrams", prec.after_bigrams},
                     {"frac_after_bigrams", prec.frac_after_bigrams()},
                     {"after_cooccurrence", prec.after_cooccurrence},
                     {"frac_after_cooccurrence", prec.frac_after_cooccurrence()}};

  return {{"n_forms", forms.size()},
          {"discipline_universe", opt.discipline_universe},
          {"moving_average_window", opt.moving_average_window},
          {"series", series},
          {"fits", fits},
          {"growth", growth},
          {"origin_classes", class_counts},
          {"intersectionality", inter_json},
          {"precedence", precedence},
          {"forms", per_form},
          {"notes", notes}};
}

}  // namespace segmap
