#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace snmine {

/// Cardinalities of two clusters, their overlap and (optionally) |Ω|.
struct CountTriple {
  std::uint64_t n_x = 0;
  std::uint64_t n_y = 0;
  std::uint64_t n_xy = 0;
  std::optional<std::uint64_t> total;

  /// Throws DomainError unless n_xy <= min(n_x, n_y) and, when total is
  /// known, max(n_x, n_y) <= total.
  void validate() const;
  CountTriple swapped() const { return {n_y, n_x, n_xy, total}; }

  friend bool operator==(const CountTriple&, const CountTriple&) = default;
};

enum class MeasureKind { jaccard, dice, overlap, cosine, pmi };

inline constexpr std::array<MeasureKind, 5> kAllMeasures = {
    MeasureKind::jaccard, MeasureKind::dice, MeasureKind::overlap,
    MeasureKind::cosine, MeasureKind::pmi};

std::string_view to_string(MeasureKind kind);
/// Throws ConfigError on an unknown name.
MeasureKind parse_measure(std::string_view name);
/// True for the four measures bounded to [0, 1].
constexpr bool is_normalized(MeasureKind kind) { return kind != MeasureKind::pmi; }

// The four normalized measures return 0 when their denominator is 0.
double jaccard(const CountTriple& c);
double dice(const CountTriple& c);
double overlap(const CountTriple& c);
double cosine(const CountTriple& c);

/// Pointwise mutual information, base 2. Empty when any of n_x, n_y, n_xy is
/// zero. Throws DomainError when total is absent or zero.
std::optional<double> pmi(const CountTriple& c);

/// Dispatches on `kind`. Only PMI can come back empty.
std::optional<double> strength(MeasureKind kind, const CountTriple& c);

}  // namespace snmine
