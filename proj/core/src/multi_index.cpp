#include "specrec/multi_index.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace specrec {

double pi_weight(const MultiIndex& k, const std::vector<double>* r) {
  return cross_weight(k, r, CrossWeight::OnePlus);
}

double cross_weight(const MultiIndex& k, const std::vector<double>* r, CrossWeight w) {
  double prod = 1.0;
  for (std::size_t i = 0; i < k.size(); ++i) {
    const double a = std::abs(k[i]);
    const double base = (w == CrossWeight::OnePlus) ? 1.0 + a : std::max(1.0, a);
    const double ri = r ? (*r)[i] : 1.0;
    prod *= (ri == 1.0) ? base : std::pow(base, ri);
  }
  return prod;
}

IndexSet::IndexSet(int dim, std::vector<MultiIndex> indices)
    : dim_(dim), indices_(std::move(indices)) {
  for (const auto& k : indices_)
    if (static_cast<int>(k.size()) != dim_)
      throw std::invalid_argument("IndexSet: index length != dim");
  if (!std::is_sorted(indices_.begin(), indices_.end()))
    throw std::invalid_argument("IndexSet: indices must be lexicographically sorted");
  if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end())
    throw std::invalid_argument("IndexSet: duplicate indices");
}

std::optional<std::size_t> IndexSet::position(const MultiIndex& k) const {
  auto it = std::lower_bound(indices_.begin(), indices_.end(), k);
  if (it == indices_.end() || *it != k) return std::nullopt;
  return static_cast<std::size_t>(it - indices_.begin());
}

void IndexSet::save_text(std::ostream& os) const {
  os << "d=" << dim_ << " n=" << indices_.size() << "\n";
  for (const auto& k : indices_) {
    for (int i = 0; i < dim_; ++i) os << (i ? " " : "") << k[i];
    os << "\n";
  }
}

IndexSet IndexSet::load_text(std::istream& is) {
  std::string header;
  if (!std::getline(is, header)) throw std::runtime_error("IndexSet: empty stream");
  int d = 0;
  std::size_t n = 0;
  if (std::sscanf(header.c_str(), "d=%d n=%zu", &d, &n) != 2)
    throw std::runtime_error("IndexSet: bad header: " + header);
  std::vector<MultiIndex> idx;
  idx.reserve(n);
  for (std::size_t row = 0; row < n; ++row) {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("IndexSet: truncated stream");
    std::istringstream ls(line);
    MultiIndex k(d);
    for (int i = 0; i < d; ++i)
      if (!(ls >> k[i])) throw std::runtime_error("IndexSet: bad row: " + line);
    idx.push_back(std::move(k));
  }
  return IndexSet(d, std::move(idx));
}

IndexSet full_cube(int M, int d, bool signed_indices) {
  if (M < 0 || d < 1) throw std::invalid_argument("full_cube: M >= 0, d >= 1 required");
  const std::size_t per = signed_indices ? 2 * std::size_t(M) + 1 : std::size_t(M) + 1;
  double total = 1.0;
  for (int i = 0; i < d; ++i) total *= double(per);
  if (total > double(std::size_t(1) << 40))
    throw SizeError("full_cube: cardinality overflow", 0);
  std::vector<MultiIndex> idx;
  idx.reserve(std::size_t(total));
  MultiIndex k(d, signed_indices ? -M : 0);
  const int lo = signed_indices ? -M : 0;
  while (true) {
    idx.push_back(k);
    int i = d - 1;
    while (i >= 0 && k[i] == M) k[i--] = lo;
    if (i < 0) break;
    ++k[i];
  }
  return IndexSet(d, std::move(idx));
}

namespace {

struct CrossGen {
  int d;
  const std::vector<double>* r;
  bool signed_indices;
  CrossWeight w;
  std::size_t cap;
  std::vector<MultiIndex>* out;
  MultiIndex cur;

  double factor(int coord, int v) const {
    const double a = std::abs(v);
    const double base = (w == CrossWeight::OnePlus) ? 1.0 + a : std::max(1.0, a);
    const double ri = r ? (*r)[coord] : 1.0;
    return (ri == 1.0) ? base : std::pow(base, ri);
  }

  void recurse(int coord, double budget) {
    if (coord == d) {
      if (out->size() >= cap)
        throw SizeError("hyperbolic_cross: cardinality cap exceeded", out->size());
      out->push_back(cur);
      return;
    }
    // largest magnitude v with factor(v) <= budget (factor is nondecreasing in |v|)
    int vmax = 0;
    while (factor(coord, vmax + 1) <= budget * (1.0 + 1e-12)) ++vmax;
    const int lo = signed_indices ? -vmax : 0;
    for (int v = lo; v <= vmax; ++v) {
      cur[coord] = v;
      recurse(coord + 1, budget / factor(coord, v));
    }
    cur[coord] = 0;
  }
};

}  // namespace

IndexSet hyperbolic_cross(double s, int d, const std::vector<double>* weights,
                          bool signed_indices, CrossWeight weight, std::size_t cap) {
  if (s < 1 || d < 1) throw std::invalid_argument("hyperbolic_cross: s >= 1, d >= 1 required");
  if (weights) {
    if (static_cast<int>(weights->size()) != d)
      throw std::invalid_argument("hyperbolic_cross: weights length != d");
    for (double ri : *weights)
      if (ri <= 0) throw std::invalid_argument("hyperbolic_cross: weights must be positive");
  }
  std::vector<MultiIndex> idx;
  CrossGen gen{d, weights, signed_indices, weight, cap, &idx, MultiIndex(d, 0)};
  gen.recurse(0, s);
  return IndexSet(d, std::move(idx));
}

}  // namespace specrec
