// Copyright 2026 The segmap Authors
// SPDX-License-Identifier: Apache-2.0

#include "segmap/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>

#include <boost/math/distributions/students_t.hpp>

#include "segmap/error.hpp"
#include "segmap/hashing.hpp"
#include "segmap/text.hpp"

namespace segmap {

namespace {

// Neumaier-compensated accumulator.
struct CompensatedSum {
  double sum = 0;
  double c = 0;
  void add(double x) {
    double t = sum + x;
    if (std::fabs(sum) >= std::fabs(x)) {
      c += (sum - t) + x;
    } else {
      c += (x - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + c; }
};

std::string format_double(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

}  // namespace

YearSeries::YearSeries(std::vector<std::pair<int, double>> points) : points_(std::move(points)) {
  for (std::size_t i = 1; i < points_.size(); ++i) {
    if (points_[i].first <= points_[i - 1].first) {
      throw Error(ErrorKind::invalid_argument, "year series must have strictly increasing years");
    }
  }
}

std::optional<double> YearSeries::at(int year) const {
  auto it = std::lower_bound(points_.begin(), points_.end(), year,
                             [](const auto& p, int y) { return p.first < y; });
  if (it == points_.end() || it->first != year) return std::nullopt;
  return it->second;
}

std::string YearSeries::to_csv(const std::string& value_column) const {
  std::string out = "year," + value_column + "\n";
  for (const auto& [y, v] : points_) {
    out += std::to_string(y);
    out += ',';
    out += format_double(v);
    out += '\n';
  }
  return out;
}

double shannon_entropy(std::span<const double> weights) {
  std::vector<double> w;
  w.reserve(weights.size());
  for (double x : weights) {
    if (!(x >= 0) || !std::isfinite(x)) {
      throw Error(ErrorKind::invalid_argument, "entropy weights must be finite and nonnegative");
    }
    if (x > 0) w.push_back(x);
  }
  if (w.empty()) throw Error(ErrorKind::invalid_argument, "entropy of an all-zero distribution");
  std::sort(w.begin(), w.end());
  CompensatedSum total;
  for (double x : w) total.add(x);
  const double s = total.value();
  CompensatedSum h;
  for (double x : w) {
    double p = x / s;
    h.add(-p * std::log(p));
  }
  return std::max(0.0, h.value());
}

double shannon_entropy(const Distribution& d) {
  std::vector<double> w;
  w.reserve(d.size());
  for (const auto& [k, v] : d) w.push_back(v);
  return shannon_entropy(w);
}

YearSeries diversity_per_year(const CandidateSet& forms, const CorpusStore& /*store*/) {
  if (forms.empty()) throw Error(ErrorKind::precondition, "diversity needs at least one form");
  std::map<int, std::vector<double>> by_year;
  for (const auto& f : forms) {
    for (const auto& [y, n] : f.per_year_counts) {
      if (n > 0) by_year[y].push_back(n);
    }
  }
  std::vector<std::pair<int, double>> pts;
  for (const auto& [y, w] : by_year) pts.emplace_back(y, shannon_entropy(w));
  return YearSeries(std::move(pts));
}

YearSeries moving_average(const YearSeries& s, int window) {
  if (window < 1) throw Error(ErrorKind::invalid_argument, "moving-average window must be >= 1");
  const auto& p = s.points();
  std::vector<std::pair<int, double>> out;
  if (p.empty()) return YearSeries{};
  const int start = p.front().first + window - 1;
  std::size_t lo = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const int y = p[i].first;
    while (p[lo].first < y - window + 1) ++lo;
    if (y < start) continue;
    CompensatedSum acc;
    for (std::size_t j = lo; j <= i; ++j) acc.add(p[j].second);
    out.emplace_back(y, acc.value() / static_cast<double>(i - lo + 1));
  }
  return YearSeries(std::move(out));
}

ExpFit exp_fit(const YearSeries& s) {
  std::vector<double> xs, ys;
  for (const auto& [year, v] : s.points()) {
    if (v > 0) {
      xs.push_back(year);
      ys.push_back(std::log(v));
    }
  }
  const std::size_t n = xs.size();
  if (n < 3) throw Error(ErrorKind::precondition, "exponential fit needs at least 3 positive points");
  CompensatedSum sx, sy;
  for (std::size_t i = 0; i < n; ++i) {
    sx.add(xs[i]);
    sy.add(ys[i]);
  }
  const double mx = sx.value() / n;
  const double my = sy.value() / n;
  CompensatedSum sxx, sxy, syy;
  for (std::size_t i = 0; i < n; ++i) {
    double dx = xs[i] - mx, dy = ys[i] - my;
    sxx.add(dx * dx);
    sxy.add(dx * dy);
    syy.add(dy * dy);
  }
  if (sxx.value() == 0) throw Error(ErrorKind::precondition, "exponential fit needs at least two distinct years");
  ExpFit fit;
  fit.b = sxy.value() / sxx.value();
  const double intercept = my - fit.b * mx;
  fit.a = std::exp(intercept);
  CompensatedSum sse;
  for (std::size_t i = 0; i < n; ++i) {
    double r = ys[i] - (my + fit.b * (xs[i] - mx));
    sse.add(r * r);
  }
  fit.r2 = syy.value() == 0 ? 1.0 : 1.0 - sse.value() / syy.value();
  return fit;
}

double annual_growth_rate(const YearSeries& s) {
  const auto& p = s.points();
  if (p.size() < 2) throw Error(ErrorKind::precondition, "growth rate needs at least two points");
  const auto& [y0, v0] = p.front();
  const auto& [y1, v1] = p.back();
  if (!(v0 > 0) || !(v1 > 0)) throw Error(ErrorKind::precondition, "growth rate needs positive endpoints");
  return std::pow(v1 / v0, 1.0 / static_cast<double>(y1 - y0)) - 1.0;
}

YearSeries forms_per_year(const CandidateSet& forms, const CorpusStore& /*store*/) {
  std::map<int, double> counts;
  for (const auto& f : forms) {
    for (const auto& [y, n] : f.per_year_counts) {
      if (n > 0) counts[y] += 1;
    }
  }
  return YearSeries({counts.begin(), counts.end()});
}

YearSeries new_forms_per_year(const CandidateSet& forms) {
  std::map<int, double> counts;
  for (const auto& f : forms) counts[f.first_year] += 1;
  return YearSeries({counts.begin(), counts.end()});
}

namespace {

std::set<std::string> distinct_codes(const DocumentRecord& r) {
  return {r.asjc_fields.begin(), r.asjc_fields.end()};
}

}  // namespace

YearSeries multidisciplinarity_per_year(const CandidateSet& forms, const CorpusStore& store) {
  std::map<int, std::map<std::string, double>> by_year;
  for (const auto& f : forms) {
    for (const auto& id : f.doc_set) {
      const DocumentRecord* r = store.find(id);
      if (!r) continue;
      for (const auto& code : distinct_codes(*r)) by_year[r->year][code] += 1;
    }
  }
  std::vector<std::pair<int, double>> pts;
  for (const auto& [y, d] : by_year) pts.emplace_back(y, shannon_entropy(d));
  return YearSeries(std::move(pts));
}

std::map<std::string, int> discipline_counts(const NGramCandidate& form, const CorpusStore& store,
                                             int up_to_year) {
  std::map<std::string, int> counts;
  for (const auto& id : form.doc_set) {
    const DocumentRecord* r = store.find(id);
    if (!r || r->year > up_to_year) continue;
    for (const auto& code : distinct_codes(*r)) ++counts[code];
  }
  return counts;
}

double transdisciplinarity_of_form(const NGramCandidate& form, const CorpusStore& store, int up_to_year,
                                   int universe_size) {
  if (universe_size < 2) throw Error(ErrorKind::invalid_argument, "discipline universe must have >= 2 fields");
  auto counts = discipline_counts(form, store, up_to_year);
  if (counts.empty()) {
    throw Error(ErrorKind::precondition, "form '" + form.term() + "' has no disciplinary publications by " +
                                             std::to_string(up_to_year));
  }
  std::vector<double> w;
  for (const auto& [k, v] : counts) w.push_back(v);
  double t = shannon_entropy(w) / std::log(static_cast<double>(universe_size));
  return std::clamp(t, 0.0, 1.0);
}

std::string_view to_string(OriginClass c) {
  switch (c) {
    case OriginClass::same_as_origin: return "same_as_origin";
    case OriginClass::different_from_origin: return "different_from_origin";
    case OriginClass::multiple_dominant: return "multiple_dominant";
    case OriginClass::no_data: return "no_data";
  }
  return "no_data";
}

namespace {

std::vector<std::string> leaders(const std::map<std::string, int>& counts) {
  int best = 0;
  for (const auto& [k, v] : counts) best = std::max(best, v);
  std::vector<std::string> out;
  for (const auto& [k, v] : counts) {
    if (v == best) out.push_back(k);
  }
  return out;
}

}  // namespace

OriginClass classify_origin_vs_dominant(const NGramCandidate& form, const CorpusStore& store) {
  auto counts = discipline_counts(form, store);
  if (counts.empty()) return OriginClass::no_data;
  auto top = leaders(counts);
  if (top.size() > 1) return OriginClass::multiple_dominant;
  return form.origin_discipline && *form.origin_discipline == top.front() ? OriginClass::same_as_origin
                                                                         : OriginClass::different_from_origin;
}

std::optional<std::string> dominant_discipline(const NGramCandidate& form, const CorpusStore& store) {
  auto counts = discipline_counts(form, store);
  if (counts.empty()) return std::nullopt;
  auto top = leaders(counts);
  if (form.origin_discipline && std::find(top.begin(), top.end(), *form.origin_discipline) != top.end()) {
    return form.origin_discipline;
  }
  return top.front();
}

PositionLexicon PositionLexicon::load(const std::filesystem::path& file) { return parse(read_file(file)); }

PositionLexicon PositionLexicon::parse(std::string_view text) {
  PositionLexicon lex;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto colon = line.find(':');
    if (colon == std::string_view::npos) {
      throw Error(ErrorKind::parse, "position lexicon line " + std::to_string(line_no) + ": missing ':'");
    }
    std::string category(trim(line.substr(0, colon)));
    if (category.empty()) {
      throw Error(ErrorKind::parse, "position lexicon line " + std::to_string(line_no) + ": empty category");
    }
    lex.categories_[category];
    std::istringstream ss{std::string(line.substr(colon + 1))};
    std::string tok;
    while (ss >> tok) lex.add(category, tok);
  }
  if (lex.categories_.empty()) throw Error(ErrorKind::parse, "position lexicon has no categories");
  return lex;
}

void PositionLexicon::add(const std::string& category, const std::string& token) {
  auto toks = tokenize_text(token);
  if (toks.size() != 1) {
    throw Error(ErrorKind::invalid_argument, "position token '" + token + "' is not a single token");
  }
  const std::string& t = toks.front();
  auto [it, inserted] = token_to_category_.emplace(t, category);
  if (!inserted && it->second != category) {
    throw Error(ErrorKind::conflict,
                "position token '" + t + "' is in both '" + it->second + "' and '" + category + "'");
  }
  categories_[category].insert(t);
}

std::set<std::string> PositionLexicon::categories_of(const NGramCandidate& form) const {
  std::set<std::string> out;
  for (std::size_t i = 0; i + 1 < form.terms.size(); ++i) {
    if (auto it = token_to_category_.find(form.terms[i]); it != token_to_category_.end()) out.insert(it->second);
  }
  return out;
}

IntersectionalityResult intersectionality(const CandidateSet& forms, const CorpusStore& store,
                                          const PositionLexicon& lexicon) {
  if (lexicon.categories().empty()) throw Error(ErrorKind::precondition, "position lexicon is empty");
  IntersectionalityResult res;
  std::vector<std::set<std::string>> cats(forms.size());
  res.intersectional_form.resize(forms.size());
  for (std::size_t i = 0; i < forms.size(); ++i) {
    cats[i] = lexicon.categories_of(forms[i]);
    res.intersectional_form[i] = cats[i].size() >= 2;
  }

  std::map<int, double> co_counts;
  for (const auto& [doc, idx] : doc_form_index(forms)) {
    const DocumentRecord* r = store.find(doc);
    if (!r) continue;
    std::set<std::string> doc_cats;
    for (auto i : idx) doc_cats.insert(cats[i].begin(), cats[i].end());
    if (doc_cats.size() >= 2) res.intersectional_works.insert(doc);

    for (std::size_t a = 0; a < idx.size(); ++a) {
      if (cats[idx[a]].empty()) continue;
      for (std::size_t b = a + 1; b < idx.size(); ++b) {
        if (cats[idx[b]].empty()) continue;
        std::set<std::string> u = cats[idx[a]];
        u.insert(cats[idx[b]].begin(), cats[idx[b]].end());
        if (u.size() < 2) continue;
        co_counts[r->year] += 1;
        auto& bins = res.pair_counts[r->year];
        for (auto p = u.begin(); p != u.end(); ++p) {
          for (auto q = std::next(p); q != u.end(); ++q) ++bins[*p + "|" + *q];
        }
      }
    }
  }
  res.co_counts = YearSeries({co_counts.begin(), co_counts.end()});
  std::vector<std::pair<int, double>> ent;
  for (const auto& [y, bins] : res.pair_counts) {
    std::vector<double> w;
    for (const auto& [k, v] : bins) w.push_back(v);
    ent.emplace_back(y, shannon_entropy(w));
  }
  res.entropy = YearSeries(std::move(ent));
  return res;
}

double PrecedenceStats::frac_after_bigrams() const {
  return qualifying == 0 ? 0.0 : static_cast<double>(after_bigrams) / static_cast<double>(qualifying);
}

double PrecedenceStats::frac_after_cooccurrence() const {
  return qualifying == 0 ? 0.0 : static_cast<double>(after_cooccurrence) / static_cast<double>(qualifying);
}

CoFirstYears cooccurrence_first_years(const CandidateSet& forms, const CorpusStore& store) {
  CoFirstYears out;
  for (const auto& [doc, idx] : doc_form_index(forms)) {
    const DocumentRecord* r = store.find(doc);
    if (!r) continue;
    for (std::size_t a = 0; a < idx.size(); ++a) {
      for (std::size_t b = a + 1; b < idx.size(); ++b) {
        std::string s = forms[idx[a]].term(), t = forms[idx[b]].term();
        if (t < s) std::swap(s, t);
        auto [it, inserted] = out.emplace(std::make_pair(s, t), r->year);
        if (!inserted) it->second = std::min(it->second, r->year);
      }
    }
  }
  return out;
}

PrecedenceStats trigram_precedence_stats(const CandidateSet& forms, const CoFirstYears& co_first_years) {
  std::map<std::string, int> first;
  for (const auto& f : forms) first[f.term()] = f.first_year;
  PrecedenceStats st;
  for (const auto& f : forms) {
    if (f.arity() != 3) continue;
    std::string b1 = f.terms[0] + " " + f.terms[2];
    std::string b2 = f.terms[1] + " " + f.terms[2];
    auto i1 = first.find(b1), i2 = first.find(b2);
    if (i1 == first.end() || i2 == first.end()) continue;
    ++st.qualifying;
    if (f.first_year > i1->second && f.first_year > i2->second) ++st.after_bigrams;
    auto key = b1 < b2 ? std::make_pair(b1, b2) : std::make_pair(b2, b1);
    if (auto it = co_first_years.find(key); it != co_first_years.end() && it->second < f.first_year) {
      ++st.after_cooccurrence;
    }
  }
  return st;
}

std::vector<double> average_ranks(std::span<const double> v) {
  const std::size_t n = v.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
    double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

SpearmanResult spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(ErrorKind::invalid_argument, "spearman inputs differ in length");
  const std::size_t n = x.size();
  if (n < 3) throw Error(ErrorKind::invalid_argument, "spearman needs at least 3 pairs");
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) {
      throw Error(ErrorKind::invalid_argument, "spearman inputs must be finite");
    }
  }
  auto rx = average_ranks(x), ry = average_ranks(y);
  // Ranks have mean (n + 1) / 2 exactly; sums below are exact for moderate n.
  const double m = (static_cast<double>(n) + 1.0) / 2.0;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double a = rx[i] - m, b = ry[i] - m;
    sxy += a * b;
    sxx += a * a;
    syy += b * b;
  }
  if (sxx == 0 || syy == 0) throw Error(ErrorKind::invalid_argument, "spearman undefined for constant input");
  SpearmanResult res;
  res.n = n;
  double rho = sxy / std::sqrt(sxx * syy);
  if (sxx == syy) rho = sxy / sxx;
  res.rho = std::clamp(rho, -1.0, 1.0);
  if (n == 2 || std::fabs(res.rho) >= 1.0) {
    res.p_value = 0.0;
  } else {
    const double df = static_cast<double>(n - 2);
    const double t = res.rho * std::sqrt(df / (1.0 - res.rho * res.rho));
    boost::math::students_t dist(df);
    res.p_value = std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t))));
  }
  return res;
}

}  // namespace segmap
