#include "snmine/measures.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "snmine/error.hpp"

namespace snmine {
namespace {

double ratio(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

}  // namespace

void CountTriple::validate() const {
  if (n_xy > std::min(n_x, n_y)) {
    throw DomainError("co-occurrence count " + std::to_string(n_xy) +
                      " exceeds min(" + std::to_string(n_x) + ", " +
                      std::to_string(n_y) + ")");
  }
  if (total && std::max(n_x, n_y) > *total) {
    throw DomainError("cluster size exceeds total " + std::to_string(*total));
  }
}

std::string_view to_string(MeasureKind kind) {
  switch (kind) {
    case MeasureKind::jaccard: return "jaccard";
    case MeasureKind::dice: return "dice";
    case MeasureKind::overlap: return "overlap";
    case MeasureKind::cosine: return "cosine";
    case MeasureKind::pmi: return "pmi";
  }
  return "?";
}

MeasureKind parse_measure(std::string_view name) {
  for (auto k : kAllMeasures) {
    if (to_string(k) == name) return k;
  }
  throw ConfigError("unknown measure: " + std::string(name));
}

double jaccard(const CountTriple& c) {
  c.validate();
  return ratio(static_cast<double>(c.n_xy),
               static_cast<double>(c.n_x + c.n_y - c.n_xy));
}

double dice(const CountTriple& c) {
  c.validate();
  return ratio(2.0 * static_cast<double>(c.n_xy),
               static_cast<double>(c.n_x) + static_cast<double>(c.n_y));
}

double overlap(const CountTriple& c) {
  c.validate();
  return ratio(static_cast<double>(c.n_xy),
               static_cast<double>(std::min(c.n_x, c.n_y)));
}

double cosine(const CountTriple& c) {
  c.validate();
  return ratio(static_cast<double>(c.n_xy),
               std::sqrt(static_cast<double>(c.n_x) * static_cast<double>(c.n_y)));
}

std::optional<double> pmi(const CountTriple& c) {
  c.validate();
  if (!c.total || *c.total == 0) {
    throw DomainError("PMI needs a positive total document count");
  }
  if (c.n_xy == 0 || c.n_x == 0 || c.n_y == 0) return std::nullopt;
  // log2(N n_xy / (n_x n_y)) split into logs to stay exact for large counts.
  return std::log2(static_cast<double>(*c.total)) +
         std::log2(static_cast<double>(c.n_xy)) -
         (std::log2(static_cast<double>(c.n_x)) + std::log2(static_cast<double>(c.n_y)));
}

std::optional<double> strength(MeasureKind kind, const CountTriple& c) {
  switch (kind) {
    case MeasureKind::jaccard: return jaccard(c);
    case MeasureKind::dice: return dice(c);
    case MeasureKind::overlap: return overlap(c);
    case MeasureKind::cosine: return cosine(c);
    case MeasureKind::pmi: return pmi(c);
  }
  throw ConfigError("unknown measure");
}

}  // namespace snmine
