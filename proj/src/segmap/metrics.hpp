// Copyright 2026 The segmap Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "segmap/corpus.hpp"
#include "segmap/extract.hpp"

namespace segmap {

/// (year, value) points with strictly increasing years; gaps allowed.
class YearSeries {
 public:
  YearSeries() = default;
  explicit YearSeries(std::vector<std::pair<int, double>> points);

  const std::vector<std::pair<int, double>>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  std::optional<double> at(int year) const;

  std::string to_csv(const std::string& value_column = "value") const;

 private:
  std::vector<std::pair<int, double>> points_;
};

/// Category -> nonnegative weight.
using Distribution = std::map<std::string, double>;

/// Natural-log Shannon entropy of the normalized weights. Throws on an
/// all-zero or negative distribution.
double shannon_entropy(std::span<const double> weights);
double shannon_entropy(const Distribution& d);

YearSeries diversity_per_year(const CandidateSet& forms, const CorpusStore& store);

/// Trailing mean over the points whose year lies in [y - window + 1, y],
/// emitted for y >= first year + window - 1.
YearSeries moving_average(const YearSeries& s, int window);

struct ExpFit {
  double a = 0;   // e^intercept
  double b = 0;   // slope of ln(y) on year
  double r2 = 0;  // of the log-linear regression
};

/// OLS of ln(y) on year over points with y > 0.
ExpFit exp_fit(const YearSeries& s);

/// Compound annual growth between the first and last points.
double annual_growth_rate(const YearSeries& s);

/// Number of forms per year: all forms published that year, and forms whose
/// first year is that year.
YearSeries forms_per_year(const CandidateSet& forms, const CorpusStore& store);
YearSeries new_forms_per_year(const CandidateSet& forms);

YearSeries multidisciplinarity_per_year(const CandidateSet& forms, const CorpusStore& store);

/// Per-discipline publication counts of one form over documents published
/// no later than `up_to_year`; every ASJC code of a document counts once.
std::map<std::string, int> discipline_counts(const NGramCandidate& form, const CorpusStore& store,
                                             int up_to_year = kMaxYear);

/// Entropy of the form's cumulative discipline distribution divided by
/// ln(universe_size).
double transdisciplinarity_of_form(const NGramCandidate& form, const CorpusStore& store, int up_to_year,
                                   int universe_size = 169);

enum class OriginClass { same_as_origin, different_from_origin, multiple_dominant, no_data };
std::string_view to_string(OriginClass c);

OriginClass classify_origin_vs_dominant(const NGramCandidate& form, const CorpusStore& store);
/// Dominant discipline with ties resolved to the origin discipline (or the
/// smallest code when the origin is not among the tied leaders).
std::optional<std::string> dominant_discipline(const NGramCandidate& form, const CorpusStore& store);

/// Seven social-position categories, each a token set; tokens are disjoint.
class PositionLexicon {
 public:
  static PositionLexicon load(const std::filesystem::path& file);
  static PositionLexicon parse(std::string_view text);

  void add(const std::string& category, const std::string& token);
  std::set<std::string> categories_of(const NGramCandidate& form) const;
  const std::map<std::string, std::set<std::string>>& categories() const { return categories_; }

 private:
  std::map<std::string, std::set<std::string>> categories_;
  std::map<std::string, std::string> token_to_category_;
};

struct IntersectionalityResult {
  std::vector<bool> intersectional_form;     // parallel to forms
  std::set<std::string> intersectional_works;  // doc ids
  YearSeries co_counts;                       // intersectional form pairs per year
  YearSeries entropy;                         // over unordered category pairs
  std::map<int, std::map<std::string, int>> pair_counts;  // year -> "a|b" -> count
};

IntersectionalityResult intersectionality(const CandidateSet& forms, const CorpusStore& store,
                                          const PositionLexicon& lexicon);

struct PrecedenceStats {
  std::size_t qualifying = 0;      // trigrams whose two component bigrams are forms
  std::size_t after_bigrams = 0;   // first published strictly after both bigrams
  std::size_t after_cooccurrence = 0;
  double frac_after_bigrams() const;
  double frac_after_cooccurrence() const;
};

/// First year in which each unordered pair of forms co-occurred, keyed by
/// the two terms in ascending order.
using CoFirstYears = std::map<std::pair<std::string, std::string>, int>;

CoFirstYears cooccurrence_first_years(const CandidateSet& forms, const CorpusStore& store);
PrecedenceStats trigram_precedence_stats(const CandidateSet& forms, const CoFirstYears& co_first_years);

struct SpearmanResult {
  double rho = 0;
  double p_value = 1;
  std::size_t n = 0;
};

/// Rank correlation with average ranks for ties; two-sided p from the
/// t approximation with n - 2 degrees of freedom.
SpearmanResult spearman(std::span<const double> x, std::span<const double> y);

/// Average (fractional) ranks, 1-based.
std::vector<double> average_ranks(std::span<const double> v);

}  // namespace segmap
