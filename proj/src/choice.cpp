#include "revrank/choice.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>

namespace revrank::choice {

std::vector<std::size_t> Portfolio::programs() const {
  std::vector<std::size_t> out;
  out.reserve(offers.size());
  for (const auto& o : offers) out.push_back(o.program);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void validate_offer(const CollegeOffer& offer) {
  if (!(offer.utility > 0.0) || !std::isfinite(offer.utility)) {
    throw std::invalid_argument("offer utility must be finite and strictly positive, got " +
                                std::to_string(offer.utility));
  }
  if (!(offer.admit_prob >= 0.0 && offer.admit_prob <= 1.0)) {
    throw std::invalid_argument("offer admit_prob must lie in [0, 1], got " +
                                std::to_string(offer.admit_prob));
  }
}

namespace {

std::vector<CollegeOffer> sorted_by_utility(std::span<const CollegeOffer> offers) {
  std::vector<CollegeOffer> sorted(offers.begin(), offers.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const CollegeOffer& a, const CollegeOffer& b) { return a.utility < b.utility; });
  return sorted;
}

// Offers must already be sorted by utility ascending.
double fold_expected_utility(std::span<const CollegeOffer> ascending) {
  double value = 0.0;
  for (const auto& o : ascending) value = o.admit_prob * o.utility + (1.0 - o.admit_prob) * value;
  return value;
}

}  // namespace

double expected_utility(std::span<const CollegeOffer> offers) {
  for (const auto& o : offers) validate_offer(o);
  auto sorted = sorted_by_utility(offers);
  return fold_expected_utility(sorted);
}

std::vector<CollegeOffer> undominated(std::span<const CollegeOffer> offers) {
  // Sweep probability levels from high to low; an offer survives iff its
  // utility reaches the best utility seen at probability >= its own.
  std::vector<std::size_t> order(offers.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return offers[a].admit_prob > offers[b].admit_prob;
  });

  std::vector<bool> keep(offers.size(), false);
  double best_utility = -std::numeric_limits<double>::infinity();
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    const double p = offers[order[i]].admit_prob;
    while (j < order.size() && offers[order[j]].admit_prob == p) {
      best_utility = std::max(best_utility, offers[order[j]].utility);
      ++j;
    }
    for (std::size_t k = i; k < j; ++k) {
      keep[order[k]] = offers[order[k]].utility >= best_utility;
    }
    i = j;
  }

  std::vector<CollegeOffer> out;
  for (std::size_t k = 0; k < offers.size(); ++k) {
    if (keep[k]) out.push_back(offers[k]);
  }
  return out;
}

Portfolio optimal_portfolio(std::span<const CollegeOffer> offers, int budget, bool allow_duplicates) {
  if (budget < 0) throw std::invalid_argument("portfolio budget must be >= 0");
  if (budget == 0) return {};
  if (offers.empty()) throw std::invalid_argument("cannot build a portfolio from an empty offer set");
  for (const auto& o : offers) validate_offer(o);

  Portfolio out;
  std::vector<bool> used(offers.size(), false);
  double previous = 0.0;  // V(k - 1)
  for (int k = 0; k < budget; ++k) {
    std::size_t best = offers.size();
    double best_value = 0.0;
    for (std::size_t c = 0; c < offers.size(); ++c) {
      if (!allow_duplicates && used[c]) continue;
      const auto& o = offers[c];
      const double value = o.admit_prob * o.utility + (1.0 - o.admit_prob) * previous;
      bool better = best == offers.size() || value > best_value;
      if (!better && value == best_value) {
        const auto& b = offers[best];
        better = o.utility > b.utility || (o.utility == b.utility && o.program < b.program);
      }
      if (better) {
        best = c;
        best_value = value;
      }
    }
    if (best == offers.size()) break;  // every offer used (duplicates off)
    used[best] = true;
    out.offers.push_back(offers[best]);
    previous = best_value;
  }

  if (allow_duplicates) {
    out.value = previous;
  } else {
    std::stable_sort(out.offers.begin(), out.offers.end(),
                     [](const CollegeOffer& a, const CollegeOffer& b) { return a.utility < b.utility; });
    out.value = fold_expected_utility(out.offers);
  }
  return out;
}

Portfolio brute_force_portfolio(std::span<const CollegeOffer> offers, int budget, bool allow_duplicates) {
  if (offers.size() > kBruteForceMaxOffers || budget > kBruteForceMaxBudget) {
    throw std::invalid_argument("brute force guard exceeded: at most " +
                                std::to_string(kBruteForceMaxOffers) + " offers and budget " +
                                std::to_string(kBruteForceMaxBudget));
  }
  if (budget < 0) throw std::invalid_argument("portfolio budget must be >= 0");
  for (const auto& o : offers) validate_offer(o);

  Portfolio best;
  std::vector<CollegeOffer> current;
  // Enumerate non-decreasing index sequences (multisets) or strictly
  // increasing ones (subsets), every size from 0 to budget.
  std::function<void(std::size_t)> extend = [&](std::size_t start) {
    const double value = expected_utility(current);
    if (value > best.value) {
      best.value = value;
      best.offers = sorted_by_utility(current);
    }
    if (static_cast<int>(current.size()) == budget) return;
    for (std::size_t c = start; c < offers.size(); ++c) {
      current.push_back(offers[c]);
      extend(allow_duplicates ? c : c + 1);
      current.pop_back();
    }
  };
  extend(0);
  return best;
}

double admit_prob(double score, double threshold, const NoiseCdf& noise, bool strict) {
  const double x = score - threshold;
  if (strict && !noise.in_concave_domain(x)) {
    throw std::domain_error("admission argument " + std::to_string(x) +
                            " lies left of the noise anchor " + std::to_string(noise.anchor));
  }
  return noise(x);
}

}  // namespace revrank::choice
