#pragma once

// Portfolio choice of a single applicant: expected utility of an application
// set, the recursive optimal portfolio, and an exhaustive oracle.

#include <cstddef>
#include <span>
#include <vector>

#include "revrank/noise_cdf.hpp"

namespace revrank::choice {

struct CollegeOffer {
  std::size_t program = 0;  // dense program index
  double admit_prob = 0.0;
  double utility = 1.0;

  bool operator==(const CollegeOffer&) const = default;
};

/// An application portfolio. Offers produced by optimal_portfolio are listed
/// by position: position 1 is the safest pick, utilities never decrease.
/// With duplicates allowed the same program can occupy several positions.
struct Portfolio {
  std::vector<CollegeOffer> offers;
  double value = 0.0;

  /// Distinct program indices, ascending.
  [[nodiscard]] std::vector<std::size_t> programs() const;
};

/// Throws std::invalid_argument unless utility > 0 and admit_prob in [0, 1].
void validate_offer(const CollegeOffer& offer);

/// Expected utility of applying to all offers: only the best admitting program
/// counts. Order-invariant; 0 for the empty list.
double expected_utility(std::span<const CollegeOffer> offers);

/// Offers not dominated by another with strictly higher utility and at least
/// the same admission probability. Input order is preserved.
std::vector<CollegeOffer> undominated(std::span<const CollegeOffer> offers);

/// Greedy recursion V(k) = max p v + (1 - p) V(k - 1).
///
/// With allow_duplicates the recursion is exactly optimal and a program may be
/// picked at several positions. Without duplicates each program is used at most
/// once; the recursion is then only a heuristic and value is the expected
/// utility of the chosen set. Argmax ties go to higher utility, then lower
/// program index.
Portfolio optimal_portfolio(std::span<const CollegeOffer> offers, int budget,
                            bool allow_duplicates = true);

inline constexpr std::size_t kBruteForceMaxOffers = 12;
inline constexpr int kBruteForceMaxBudget = 5;

/// Exhaustive search over all portfolios of size <= budget (multisets when
/// allow_duplicates). Guarded to 12 offers and budget 5.
Portfolio brute_force_portfolio(std::span<const CollegeOffer> offers, int budget,
                                bool allow_duplicates = true);

/// F(score - threshold). In strict mode arguments left of the concave domain throw.
double admit_prob(double score, double threshold, const NoiseCdf& noise, bool strict = false);

}  // namespace revrank::choice
