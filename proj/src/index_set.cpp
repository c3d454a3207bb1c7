#include "aalenfic/index_set.hpp"

#include <algorithm>
#include <numeric>

#include "aalenfic/errors.hpp"

namespace aalenfic {

IndexSet::IndexSet(std::vector<int> zero_based, int dimension)
    : indices_(std::move(zero_based)), dimension_(dimension) {
  if (dimension_ < 1) throw ValidationError("index set: covariate dimension must be >= 1");
  if (indices_.empty()) throw ValidationError("index set must be nonempty");
  std::sort(indices_.begin(), indices_.end());
  if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end())
    throw ValidationError("index set contains duplicate indices");
  if (indices_.front() < 0 || indices_.back() >= dimension_)
    throw ValidationError("index set out of range 1.." + std::to_string(dimension_));
}

IndexSet IndexSet::from_one_based(std::vector<int> indices, int dimension) {
  for (int& i : indices) --i;
  return IndexSet(std::move(indices), dimension);
}

IndexSet IndexSet::from_zero_based(std::vector<int> indices, int dimension) {
  return IndexSet(std::move(indices), dimension);
}

IndexSet IndexSet::full(int dimension) {
  std::vector<int> all(static_cast<size_t>(std::max(dimension, 0)));
  std::iota(all.begin(), all.end(), 0);
  return IndexSet(std::move(all), dimension);
}

std::vector<int> IndexSet::complement() const {
  std::vector<int> out;
  out.reserve(static_cast<size_t>(dimension_ - size()));
  size_t k = 0;
  for (int j = 0; j < dimension_; ++j) {
    if (k < indices_.size() && indices_[k] == j) {
      ++k;
    } else {
      out.push_back(j);
    }
  }
  return out;
}

std::vector<int> IndexSet::one_based() const {
  std::vector<int> out = indices_;
  for (int& i : out) ++i;
  return out;
}

bool IndexSet::contains(int zero_based) const {
  return std::binary_search(indices_.begin(), indices_.end(), zero_based);
}

std::string IndexSet::to_string() const {
  std::string s = "{";
  for (size_t k = 0; k < indices_.size(); ++k) {
    if (k) s += ",";
    s += std::to_string(indices_[k] + 1);
  }
  return s + "}";
}

}  // namespace aalenfic
