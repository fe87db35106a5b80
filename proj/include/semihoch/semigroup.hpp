#pragma once

// Finite semigroups given by multiplication tables, semilattices with their
// canonical order, bands, and strong semilattice (de)composition.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace semihoch {

using Element = std::uint32_t;

class FiniteSemigroup {
 public:
  FiniteSemigroup() = default;

  // Checks shape, range and associativity (first violating triple in
  // lexicographic order is reported through NonAssociative).
  static FiniteSemigroup validate(std::vector<std::string> labels,
                                  const std::vector<std::vector<Element>>& table);

  std::size_t size() const { return labels_.size(); }
  Element product(Element x, Element y) const { return table_[x * size() + y]; }
  const std::string& label(Element x) const { return labels_.at(x); }
  const std::vector<std::string>& labels() const { return labels_; }
  std::optional<Element> find(const std::string& label) const;
  std::vector<std::vector<Element>> table() const;

  bool is_commutative() const;
  bool is_idempotent(Element x) const { return product(x, x) == x; }
  std::optional<Element> identity() const;
  bool is_group() const;

  friend bool operator==(const FiniteSemigroup&,
                         const FiniteSemigroup&) = default;

 private:
  std::vector<std::string> labels_;
  std::vector<Element> table_;
};

struct SemilatticeCheck;

class FiniteSemilattice {
 public:
  FiniteSemilattice() = default;

  const FiniteSemigroup& semigroup() const { return sg_; }
  std::size_t size() const { return sg_.size(); }
  Element meet(Element e, Element f) const { return sg_.product(e, f); }
  // f <= e  iff  ef = f
  bool leq(Element f, Element e) const { return order_[f * size() + e] != 0; }
  const std::string& label(Element e) const { return sg_.label(e); }
  // Product of all elements: the least element.
  Element bottom() const;
  std::optional<Element> top() const { return sg_.identity(); }

  friend bool operator==(const FiniteSemilattice&,
                         const FiniteSemilattice&) = default;

 private:
  friend SemilatticeCheck as_semilattice(const FiniteSemigroup& s);
  FiniteSemigroup sg_;
  std::vector<char> order_;
};

struct SemilatticeCheck {
  std::optional<FiniteSemilattice> value;
  // (x, y) with xy != yx, or (x, x) with xx != x.
  std::optional<std::pair<Element, Element>> violation;
};

SemilatticeCheck as_semilattice(const FiniteSemigroup& s);

inline constexpr unsigned kDefaultFreeSemilatticeBound = 6;

// Non-empty subsets of {1..k} under union; labels like "{1,3}". Element
// order: subsets sorted by bitmask.
FiniteSemilattice free_semilattice(unsigned k,
                                   unsigned bound = kDefaultFreeSemilatticeBound);
// Bitmask of the subset that element x of free_semilattice(k) stands for.
inline std::uint32_t free_semilattice_mask(Element x) { return x + 1; }

enum class BandClass { NotBand, Band, NormalBand, RectangularBand, Semilattice };
const char* to_string(BandClass c);

BandClass band_class(const FiniteSemigroup& s);

struct DecompositionData {
  FiniteSemilattice shape;
  std::vector<FiniteSemigroup> components;  // indexed by shape element
  // transitions[f * |shape| + e] for f <= e: map of component e into f.
  std::vector<std::vector<Element>> transitions;

  const std::vector<Element>& transition(Element f, Element e) const {
    return transitions.at(f * shape.size() + e);
  }
};

// Throws ValidationError naming the first violated invariant.
void validate_decomposition(const DecompositionData& d);

// Elements ordered by shape element, then component order. Labels are the
// component labels when those are globally distinct, "shape/elem" otherwise.
FiniteSemigroup assemble_strong_semilattice(const DecompositionData& d);

// Decomposes finite Clifford semigroups (shape = idempotents, components =
// maximal subgroups, transitions x -> f x f) and normal bands (shape = the
// D-classes, components = rectangular D-classes, transitions x -> x r x for
// any r in the target class). The result is re-assembled and compared with
// `s` before it is returned; `why` receives the reason for a refusal.
std::optional<DecompositionData> decompose_strong_semilattice(
    const FiniteSemigroup& s, std::string* why = nullptr);

// Small catalogue used by fixtures and tests.
FiniteSemigroup trivial_group();
FiniteSemigroup cyclic_group(unsigned n);
FiniteSemigroup symmetric_group_3();
FiniteSemigroup rectangular_band(unsigned rows, unsigned cols);
FiniteSemilattice chain_semilattice(unsigned length);

}  // namespace semihoch
