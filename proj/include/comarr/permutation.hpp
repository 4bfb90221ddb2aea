#pragma once

#include <cstddef>
#include <vector>

namespace comarr {

/// Element of the symmetric group on {0, ..., k-1}, stored by its images.
/// Acts on coordinate vectors by (g.x)_{g(i)} = x_i.
class Permutation {
 public:
  Permutation() = default;
  /// Throws std::invalid_argument if `image` is not a bijection.
  explicit Permutation(std::vector<int> image);
  static Permutation identity(std::size_t k);
  static Permutation transposition(std::size_t k, int a, int b);

  [[nodiscard]] std::size_t size() const { return image_.size(); }
  int operator()(int i) const { return image_[static_cast<std::size_t>(i)]; }
  [[nodiscard]] const std::vector<int>& image() const { return image_; }

  [[nodiscard]] Permutation inverse() const;
  /// +1 or -1.
  [[nodiscard]] int sign() const;
  /// Cycle lengths in non-increasing order (fixed points included).
  [[nodiscard]] std::vector<int> cycle_type() const;
  [[nodiscard]] bool is_identity() const;

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;

 private:
  std::vector<int> image_;
};

/// (a * b)(i) = a(b(i)).
Permutation operator*(const Permutation& a, const Permutation& b);

/// All k! permutations in lexicographic order of their image lists.
std::vector<Permutation> all_permutations(std::size_t k);

struct ConjugacyClass {
  std::vector<int> cycle_type;
  Permutation representative;
  std::size_t size = 0;
};

/// One entry per partition of k.
std::vector<ConjugacyClass> conjugacy_classes(std::size_t k);

/// Finite symmetric group with a multiplication table, for repeated
/// group-element bookkeeping over cell orbits.
class SymmetricGroup {
 public:
  explicit SymmetricGroup(std::size_t k);

  [[nodiscard]] std::size_t degree() const { return k_; }
  [[nodiscard]] std::size_t order() const { return elements_.size(); }
  [[nodiscard]] const Permutation& element(std::size_t g) const { return elements_[g]; }
  [[nodiscard]] std::size_t multiply(std::size_t a, std::size_t b) const {
    return table_[a * elements_.size() + b];
  }
  [[nodiscard]] std::size_t inverse(std::size_t g) const { return inverse_[g]; }
  [[nodiscard]] std::size_t index_of(const Permutation& p) const;
  [[nodiscard]] int sign(std::size_t g) const { return signs_[g]; }
  /// Indices of the adjacent transpositions (i, i+1).
  [[nodiscard]] std::vector<std::size_t> generators() const;

 private:
  std::size_t k_;
  std::vector<Permutation> elements_;
  std::vector<std::size_t> table_;
  std::vector<std::size_t> inverse_;
  std::vector<int> signs_;
};

/// One-dimensional characters of the symmetric group used as coefficient
/// twists.
enum class Twist { Trivial, Sign };

inline int character_value(Twist t, const Permutation& g) {
  return t == Twist::Trivial ? 1 : g.sign();
}

}  // namespace comarr
