#pragma once

#include <string>
#include <vector>

namespace aalenfic {

/// A nonempty subset of the covariate positions {1..r}, kept sorted.
/// Stored zero-based internally; external text and JSON use 1-based indices.
class IndexSet {
public:
  static IndexSet from_one_based(std::vector<int> indices, int dimension);
  static IndexSet from_zero_based(std::vector<int> indices, int dimension);
  static IndexSet full(int dimension);

  const std::vector<int>& indices() const { return indices_; }  // zero-based
  std::vector<int> complement() const;                          // zero-based, sorted
  std::vector<int> one_based() const;

  int size() const { return static_cast<int>(indices_.size()); }
  int dimension() const { return dimension_; }
  bool is_full() const { return size() == dimension_; }
  bool contains(int zero_based) const;

  std::string to_string() const;  // e.g. "{1,3}" (1-based)

  bool operator==(const IndexSet& other) const {
    return dimension_ == other.dimension_ && indices_ == other.indices_;
  }
  // lexicographic on the index lists; used only as a container key
  bool operator<(const IndexSet& other) const { return indices_ < other.indices_; }

private:
  IndexSet(std::vector<int> zero_based, int dimension);

  std::vector<int> indices_;
  int dimension_;
};

}  // namespace aalenfic
