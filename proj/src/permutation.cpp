#include "comarr/permutation.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace comarr {

Permutation::Permutation(std::vector<int> image) : image_(std::move(image)) {
  std::vector<bool> seen(image_.size(), false);
  for (int v : image_) {
    if (v < 0 || static_cast<std::size_t>(v) >= image_.size() || seen[static_cast<std::size_t>(v)]) {
      throw std::invalid_argument("permutation image is not a bijection");
    }
    seen[static_cast<std::size_t>(v)] = true;
  }
}

Permutation Permutation::identity(std::size_t k) {
  std::vector<int> img(k);
  std::iota(img.begin(), img.end(), 0);
  return Permutation(std::move(img));
}

Permutation Permutation::transposition(std::size_t k, int a, int b) {
  auto p = identity(k);
  std::swap(p.image_[static_cast<std::size_t>(a)], p.image_[static_cast<std::size_t>(b)]);
  return p;
}

Permutation Permutation::inverse() const {
  std::vector<int> inv(image_.size());
  for (std::size_t i = 0; i < image_.size(); ++i) {
    inv[static_cast<std::size_t>(image_[i])] = static_cast<int>(i);
  }
  return Permutation(std::move(inv));
}

int Permutation::sign() const {
  int s = 1;
  for (int len : cycle_type()) {
    if (len % 2 == 0) s = -s;
  }
  return s;
}

std::vector<int> Permutation::cycle_type() const {
  std::vector<bool> seen(image_.size(), false);
  std::vector<int> lengths;
  for (std::size_t i = 0; i < image_.size(); ++i) {
    if (seen[i]) continue;
    int len = 0;
    for (std::size_t j = i; !seen[j]; j = static_cast<std::size_t>(image_[j])) {
      seen[j] = true;
      ++len;
    }
    lengths.push_back(len);
  }
  std::sort(lengths.begin(), lengths.end(), std::greater<>());
  return lengths;
}

bool Permutation::is_identity() const {
  for (std::size_t i = 0; i < image_.size(); ++i) {
    if (image_[i] != static_cast<int>(i)) return false;
  }
  return true;
}

Permutation operator*(const Permutation& a, const Permutation& b) {
  if (a.size() != b.size()) throw std::invalid_argument("composing permutations of different degree");
  std::vector<int> img(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) img[i] = a(b(static_cast<int>(i)));
  return Permutation(std::move(img));
}

std::vector<Permutation> all_permutations(std::size_t k) {
  std::vector<int> img(k);
  std::iota(img.begin(), img.end(), 0);
  std::vector<Permutation> out;
  do {
    out.emplace_back(img);
  } while (std::next_permutation(img.begin(), img.end()));
  return out;
}

std::vector<ConjugacyClass> conjugacy_classes(std::size_t k) {
  std::vector<ConjugacyClass> out;
  for (const auto& p : all_permutations(k)) {
    auto type = p.cycle_type();
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const ConjugacyClass& c) { return c.cycle_type == type; });
    if (it == out.end()) {
      out.push_back({std::move(type), p, 1});
    } else {
      ++it->size;
    }
  }
  return out;
}

SymmetricGroup::SymmetricGroup(std::size_t k) : k_(k), elements_(all_permutations(k)) {
  const std::size_t n = elements_.size();
  table_.resize(n * n);
  inverse_.resize(n);
  signs_.resize(n);
  for (std::size_t a = 0; a < n; ++a) {
    signs_[a] = elements_[a].sign();
    for (std::size_t b = 0; b < n; ++b) table_[a * n + b] = index_of(elements_[a] * elements_[b]);
    inverse_[a] = index_of(elements_[a].inverse());
  }
}

std::size_t SymmetricGroup::index_of(const Permutation& p) const {
  auto it = std::lower_bound(elements_.begin(), elements_.end(), p);
  if (it == elements_.end() || *it != p) throw std::invalid_argument("permutation not in group");
  return static_cast<std::size_t>(it - elements_.begin());
}

std::vector<std::size_t> SymmetricGroup::generators() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i + 1 < k_; ++i) {
    out.push_back(index_of(Permutation::transposition(k_, static_cast<int>(i), static_cast<int>(i + 1))));
  }
  return out;
}

}  // namespace comarr
