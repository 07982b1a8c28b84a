#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace specrec {

// A frequency multi-index k in Z^d (signed, Fourier) or N_0^d (Chebyshev/Legendre).
using MultiIndex = std::vector<int>;

struct SizeError : std::runtime_error {
  std::size_t partial_count;
  SizeError(const std::string& what, std::size_t partial)
      : std::runtime_error(what), partial_count(partial) {}
};

// Weight used by the hyperbolic cross constraint. OnePlus is prod (1+|k_i|)^{r_i};
// MaxOne is prod max(1,|k_i|)^{r_i}, which matches the reference error tables.
enum class CrossWeight { OnePlus, MaxOne };

double pi_weight(const MultiIndex& k, const std::vector<double>* r = nullptr);
double cross_weight(const MultiIndex& k, const std::vector<double>* r, CrossWeight w);

// Ordered finite set of multi-indices; enumeration is lexicographic so column
// ordinals are reproducible.
class IndexSet {
 public:
  IndexSet() = default;
  // `indices` must be lexicographically sorted and distinct.
  IndexSet(int dim, std::vector<MultiIndex> indices);

  int dim() const { return dim_; }
  std::size_t size() const { return indices_.size(); }
  const std::vector<MultiIndex>& indices() const { return indices_; }
  const MultiIndex& operator[](std::size_t i) const { return indices_[i]; }

  // Ordinal of k, or nullopt if absent. O(log |J|) via binary search.
  std::optional<std::size_t> position(const MultiIndex& k) const;
  bool contains(const MultiIndex& k) const { return position(k).has_value(); }

  void save_text(std::ostream& os) const;
  static IndexSet load_text(std::istream& is);

 private:
  int dim_ = 0;
  std::vector<MultiIndex> indices_;
};

IndexSet full_cube(int M, int d, bool signed_indices);

// {k : cross_weight(k) <= s}, generated by per-coordinate budget splitting.
IndexSet hyperbolic_cross(double s, int d,
                          const std::vector<double>* weights = nullptr,
                          bool signed_indices = true,
                          CrossWeight weight = CrossWeight::OnePlus,
                          std::size_t cap = std::size_t(1) << 27);

}  // namespace specrec
