#include "semihoch/semigroup.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <numeric>
#include <set>

#include "semihoch/error.hpp"
#include "semihoch/trace.hpp"

namespace semihoch {

FiniteSemigroup FiniteSemigroup::validate(
    std::vector<std::string> labels,
    const std::vector<std::vector<Element>>& table) {
  note_op("validate_semigroup");
  const std::size_t n = table.size();
  if (labels.size() != n) {
    throw ValidationError("expected " + std::to_string(n) + " labels, got " +
                          std::to_string(labels.size()));
  }
  if (std::set<std::string>(labels.begin(), labels.end()).size() != n) {
    throw ValidationError("element labels are not distinct");
  }
  FiniteSemigroup s;
  s.labels_ = std::move(labels);
  s.table_.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    if (table[i].size() != n) {
      throw ValidationError("row " + std::to_string(i) + " of the table has " +
                            std::to_string(table[i].size()) + " entries, expected " +
                            std::to_string(n));
    }
    for (Element v : table[i]) {
      if (v >= n) {
        throw IndexOutOfRange("table entry " + std::to_string(v) +
                              " in row " + std::to_string(i) + " is out of range");
      }
      s.table_.push_back(v);
    }
  }
  for (Element i = 0; i < n; ++i) {
    for (Element j = 0; j < n; ++j) {
      Element ij = s.product(i, j);
      for (Element k = 0; k < n; ++k) {
        if (s.product(ij, k) != s.product(i, s.product(j, k))) {
          throw NonAssociative(i, j, k);
        }
      }
    }
  }
  return s;
}

std::optional<Element> FiniteSemigroup::find(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<Element>(it - labels_.begin());
}

std::vector<std::vector<Element>> FiniteSemigroup::table() const {
  std::vector<std::vector<Element>> out(size());
  for (Element i = 0; i < size(); ++i) {
    out[i].assign(table_.begin() + static_cast<long>(i * size()),
                  table_.begin() + static_cast<long>((i + 1) * size()));
  }
  return out;
}

bool FiniteSemigroup::is_commutative() const {
  for (Element i = 0; i < size(); ++i) {
    for (Element j = i + 1; j < size(); ++j) {
      if (product(i, j) != product(j, i)) return false;
    }
  }
  return true;
}

std::optional<Element> FiniteSemigroup::identity() const {
  for (Element e = 0; e < size(); ++e) {
    bool ok = true;
    for (Element x = 0; x < size() && ok; ++x) {
      ok = product(e, x) == x && product(x, e) == x;
    }
    if (ok) return e;
  }
  return std::nullopt;
}

bool FiniteSemigroup::is_group() const {
  auto e = identity();
  if (!e || size() == 0) return false;
  for (Element x = 0; x < size(); ++x) {
    bool invertible = false;
    for (Element y = 0; y < size() && !invertible; ++y) {
      invertible = product(x, y) == *e && product(y, x) == *e;
    }
    if (!invertible) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

Element FiniteSemilattice::bottom() const {
  Element b = 0;
  for (Element e = 1; e < size(); ++e) b = meet(b, e);
  return b;
}

SemilatticeCheck as_semilattice(const FiniteSemigroup& s) {
  note_op("as_semilattice");
  SemilatticeCheck out;
  for (Element x = 0; x < s.size(); ++x) {
    if (!s.is_idempotent(x)) {
      out.violation = {x, x};
      return out;
    }
  }
  for (Element x = 0; x < s.size(); ++x) {
    for (Element y = x + 1; y < s.size(); ++y) {
      if (s.product(x, y) != s.product(y, x)) {
        out.violation = {x, y};
        return out;
      }
    }
  }
  FiniteSemilattice l;
  l.sg_ = s;
  l.order_.assign(s.size() * s.size(), 0);
  for (Element f = 0; f < s.size(); ++f) {
    for (Element e = 0; e < s.size(); ++e) {
      l.order_[f * s.size() + e] = s.product(e, f) == f ? 1 : 0;
    }
  }
  out.value = std::move(l);
  return out;
}

FiniteSemilattice free_semilattice(unsigned k, unsigned bound) {
  note_op("free_semilattice");
  if (k < 1) throw BoundExceeded("free semilattice needs at least one generator");
  if (k > bound) {
    throw BoundExceeded("free semilattice on " + std::to_string(k) +
                        " generators exceeds the bound " + std::to_string(bound));
  }
  const std::uint32_t n = (1u << k) - 1;
  std::vector<std::string> labels;
  for (std::uint32_t mask = 1; mask <= n; ++mask) {
    std::string label = "{";
    bool first = true;
    for (unsigned b = 0; b < k; ++b) {
      if (mask & (1u << b)) {
        if (!first) label += ",";
        label += std::to_string(b + 1);
        first = false;
      }
    }
    labels.push_back(label + "}");
  }
  std::vector<std::vector<Element>> table(n, std::vector<Element>(n));
  for (std::uint32_t a = 1; a <= n; ++a) {
    for (std::uint32_t b = 1; b <= n; ++b) table[a - 1][b - 1] = (a | b) - 1;
  }
  return *as_semilattice(FiniteSemigroup::validate(std::move(labels), table)).value;
}

FiniteSemilattice chain_semilattice(unsigned length) {
  if (length < 1) throw ValidationError("a chain needs at least one element");
  std::vector<std::string> labels;
  std::vector<std::vector<Element>> table(length, std::vector<Element>(length));
  for (Element i = 0; i < length; ++i) {
    labels.push_back("c" + std::to_string(i));
    for (Element j = 0; j < length; ++j) table[i][j] = std::max(i, j);
  }
  return *as_semilattice(FiniteSemigroup::validate(std::move(labels), table)).value;
}

// ---------------------------------------------------------------------------

const char* to_string(BandClass c) {
  switch (c) {
    case BandClass::NotBand: return "NotBand";
    case BandClass::Band: return "Band";
    case BandClass::NormalBand: return "NormalBand";
    case BandClass::RectangularBand: return "RectangularBand";
    case BandClass::Semilattice: return "Semilattice";
  }
  return "?";
}

BandClass band_class(const FiniteSemigroup& s) {
  note_op("band_class");
  const Element n = static_cast<Element>(s.size());
  for (Element x = 0; x < n; ++x) {
    if (!s.is_idempotent(x)) return BandClass::NotBand;
  }
  if (s.is_commutative()) return BandClass::Semilattice;
  bool rectangular = true;
  bool normal = true;
  for (Element a = 0; a < n; ++a) {
    for (Element b = 0; b < n; ++b) {
      Element ab = s.product(a, b);
      for (Element c = 0; c < n; ++c) {
        Element abc = s.product(ab, c);
        if (abc != s.product(a, c)) rectangular = false;
        Element acb = s.product(s.product(a, c), b);
        if (s.product(abc, a) != s.product(acb, a)) normal = false;
      }
    }
  }
  if (rectangular) return BandClass::RectangularBand;
  if (normal) return BandClass::NormalBand;
  return BandClass::Band;
}

// ---------------------------------------------------------------------------

void validate_decomposition(const DecompositionData& d) {
  const Element n = static_cast<Element>(d.shape.size());
  if (d.components.size() != n) {
    throw ValidationError("decomposition has " +
                          std::to_string(d.components.size()) +
                          " components for a shape of size " + std::to_string(n));
  }
  if (d.transitions.size() != std::size_t{n} * n) {
    throw ValidationError("transition table has the wrong size");
  }
  auto name = [&](Element f, Element e) {
    return d.shape.label(f) + "<" + d.shape.label(e);
  };
  for (Element e = 0; e < n; ++e) {
    for (Element f = 0; f < n; ++f) {
      if (!d.shape.leq(f, e)) continue;
      const auto& phi = d.transition(f, e);
      const auto& src = d.components[e];
      const auto& dst = d.components[f];
      if (phi.size() != src.size()) {
        throw ValidationError("transition " + name(f, e) + " has the wrong length");
      }
      for (Element x : phi) {
        if (x >= dst.size()) {
          throw ValidationError("transition " + name(f, e) + " leaves its target");
        }
      }
      for (Element x = 0; x < src.size(); ++x) {
        if (e == f && phi[x] != x) {
          throw ValidationError("transition " + name(e, e) + " is not the identity");
        }
        for (Element y = 0; y < src.size(); ++y) {
          if (phi[src.product(x, y)] != dst.product(phi[x], phi[y])) {
            throw ValidationError("transition " + name(f, e) +
                                  " is not a homomorphism");
          }
        }
      }
    }
  }
  for (Element e = 0; e < n; ++e) {
    for (Element f = 0; f < n; ++f) {
      if (!d.shape.leq(f, e)) continue;
      for (Element g = 0; g < n; ++g) {
        if (!d.shape.leq(g, f)) continue;
        const auto& fe = d.transition(f, e);
        const auto& gf = d.transition(g, f);
        const auto& ge = d.transition(g, e);
        for (Element x = 0; x < fe.size(); ++x) {
          if (gf[fe[x]] != ge[x]) {
            throw ValidationError("transitions " + name(g, f) + " o " + name(f, e) +
                                  " and " + name(g, e) + " disagree");
          }
        }
      }
    }
  }
}

FiniteSemigroup assemble_strong_semilattice(const DecompositionData& d) {
  note_op("assemble_strong_semilattice");
  validate_decomposition(d);
  const Element n = static_cast<Element>(d.shape.size());
  std::vector<Element> offset(n + 1, 0);
  for (Element e = 0; e < n; ++e) {
    offset[e + 1] = offset[e] + static_cast<Element>(d.components[e].size());
  }
  std::vector<std::string> labels;
  std::set<std::string> seen;
  bool distinct = true;
  for (const auto& c : d.components) {
    for (const auto& l : c.labels()) distinct = seen.insert(l).second && distinct;
  }
  for (Element e = 0; e < n; ++e) {
    for (const auto& l : d.components[e].labels()) {
      labels.push_back(distinct ? l : d.shape.label(e) + "/" + l);
    }
  }
  const Element total = offset[n];
  std::vector<std::vector<Element>> table(total, std::vector<Element>(total));
  for (Element e = 0; e < n; ++e) {
    for (Element f = 0; f < n; ++f) {
      Element g = d.shape.meet(e, f);
      const auto& ge = d.transition(g, e);
      const auto& gf = d.transition(g, f);
      const auto& target = d.components[g];
      for (Element x = 0; x < d.components[e].size(); ++x) {
        for (Element y = 0; y < d.components[f].size(); ++y) {
          table[offset[e] + x][offset[f] + y] =
              offset[g] + target.product(ge[x], gf[y]);
        }
      }
    }
  }
  return FiniteSemigroup::validate(std::move(labels), table);
}

namespace {

FiniteSemigroup restrict_to(const FiniteSemigroup& s,
                            const std::vector<Element>& members) {
  std::vector<std::string> labels;
  std::vector<std::vector<Element>> table(members.size(),
                                          std::vector<Element>(members.size()));
  for (std::size_t i = 0; i < members.size(); ++i) {
    labels.push_back(s.label(members[i]));
    for (std::size_t j = 0; j < members.size(); ++j) {
      auto it = std::find(members.begin(), members.end(),
                          s.product(members[i], members[j]));
      if (it == members.end()) {
        throw ValidationError("subset is not closed under multiplication");
      }
      table[i][j] = static_cast<Element>(it - members.begin());
    }
  }
  return FiniteSemigroup::validate(std::move(labels), table);
}

// Partition of s into classes, each list ascending; class order by smallest
// member. `cls[x]` is the class of x.
struct Partition {
  std::vector<std::vector<Element>> classes;
  std::vector<Element> cls;
};

Partition partition_by(const FiniteSemigroup& s,
                       const std::vector<Element>& key) {
  Partition p;
  p.cls.assign(s.size(), 0);
  std::vector<Element> seen;
  for (Element x = 0; x < s.size(); ++x) {
    auto it = std::find(seen.begin(), seen.end(), key[x]);
    if (it == seen.end()) {
      seen.push_back(key[x]);
      p.classes.emplace_back();
      it = seen.end() - 1;
    }
    Element c = static_cast<Element>(it - seen.begin());
    p.cls[x] = c;
    p.classes[c].push_back(x);
  }
  return p;
}

std::optional<DecompositionData> build_from_partition(
    const FiniteSemigroup& s, const Partition& p,
    const std::vector<Element>& shape_rep,
    const std::function<Element(Element x, Element target_class)>& transit,
    std::string* why) {
  const Element n = static_cast<Element>(p.classes.size());
  // Shape: class product must be well defined.
  std::vector<std::vector<Element>> shape_table(n, std::vector<Element>(n));
  for (Element a = 0; a < n; ++a) {
    for (Element b = 0; b < n; ++b) {
      shape_table[a][b] = p.cls[s.product(shape_rep[a], shape_rep[b])];
    }
  }
  for (Element x = 0; x < s.size(); ++x) {
    for (Element y = 0; y < s.size(); ++y) {
      if (p.cls[s.product(x, y)] != shape_table[p.cls[x]][p.cls[y]]) {
        if (why) *why = "class product is not well defined";
        return std::nullopt;
      }
    }
  }
  std::vector<std::string> shape_labels;
  for (Element a = 0; a < n; ++a) shape_labels.push_back("[" + s.label(shape_rep[a]) + "]");
  auto shape_check = as_semilattice(
      FiniteSemigroup::validate(std::move(shape_labels), shape_table));
  if (!shape_check.value) {
    if (why) *why = "class quotient is not a semilattice";
    return std::nullopt;
  }
  DecompositionData d;
  d.shape = *shape_check.value;
  for (Element a = 0; a < n; ++a) d.components.push_back(restrict_to(s, p.classes[a]));
  d.transitions.assign(std::size_t{n} * n, {});
  for (Element e = 0; e < n; ++e) {
    for (Element f = 0; f < n; ++f) {
      if (!d.shape.leq(f, e)) continue;
      std::vector<Element> phi;
      for (Element x : p.classes[e]) {
        Element y = transit(x, f);
        auto it = std::find(p.classes[f].begin(), p.classes[f].end(), y);
        if (it == p.classes[f].end()) {
          if (why) *why = "transition leaves its target component";
          return std::nullopt;
        }
        phi.push_back(static_cast<Element>(it - p.classes[f].begin()));
      }
      d.transitions[f * n + e] = std::move(phi);
    }
  }
  try {
    FiniteSemigroup back = assemble_strong_semilattice(d);
    for (Element x = 0; x < s.size(); ++x) {
      for (Element y = 0; y < s.size(); ++y) {
        Element bx = *back.find(s.label(x));
        Element by = *back.find(s.label(y));
        if (back.label(back.product(bx, by)) != s.label(s.product(x, y))) {
          if (why) *why = "re-assembled table differs from the input";
          return std::nullopt;
        }
      }
    }
  } catch (const ValidationError& err) {
    if (why) *why = err.what();
    return std::nullopt;
  }
  return d;
}

std::optional<DecompositionData> decompose_clifford(const FiniteSemigroup& s,
                                                    std::string* why) {
  const Element n = static_cast<Element>(s.size());
  std::vector<Element> idem_of(n);
  for (Element x = 0; x < n; ++x) {
    Element p = x;
    for (Element step = 0; step <= n && !s.is_idempotent(p); ++step) {
      p = s.product(p, x);
    }
    idem_of[x] = p;
  }
  for (Element e = 0; e < n; ++e) {
    if (!s.is_idempotent(e)) continue;
    for (Element x = 0; x < n; ++x) {
      if (s.product(e, x) != s.product(x, e)) {
        if (why) *why = "idempotent " + s.label(e) + " is not central";
        return std::nullopt;
      }
    }
  }
  for (Element x = 0; x < n; ++x) {
    Element e = idem_of[x];
    bool invertible = false;
    for (Element y = 0; y < n && !invertible; ++y) {
      invertible = idem_of[y] == e && s.product(x, y) == e;
    }
    if (s.product(x, e) != x || !invertible) {
      if (why) *why = "element " + s.label(x) + " lies in no subgroup";
      return std::nullopt;
    }
  }
  Partition p = partition_by(s, idem_of);
  std::vector<Element> reps;
  for (const auto& c : p.classes) reps.push_back(idem_of[c.front()]);
  for (std::size_t a = 0; a < p.classes.size(); ++a) {
    if (!restrict_to(s, p.classes[a]).is_group()) {
      if (why) *why = "component of " + s.label(reps[a]) + " is not a group";
      return std::nullopt;
    }
  }
  auto transit = [&](Element x, Element f) {
    Element idem = reps[f];
    return s.product(s.product(idem, x), idem);
  };
  return build_from_partition(s, p, reps, transit, why);
}

std::optional<DecompositionData> decompose_normal_band(const FiniteSemigroup& s,
                                                       std::string* why) {
  const Element n = static_cast<Element>(s.size());
  // In a band, x D y iff xyx = x and yxy = y.
  std::vector<Element> key(n);
  for (Element x = 0; x < n; ++x) {
    key[x] = x;
    for (Element y = 0; y < x; ++y) {
      if (s.product(s.product(x, y), x) == x && s.product(s.product(y, x), y) == y) {
        key[x] = key[y];
        break;
      }
    }
  }
  Partition p = partition_by(s, key);
  std::vector<Element> reps;
  for (const auto& c : p.classes) reps.push_back(c.front());
  auto transit = [&](Element x, Element f) {
    return s.product(s.product(x, reps[f]), x);
  };
  return build_from_partition(s, p, reps, transit, why);
}

}  // namespace

std::optional<DecompositionData> decompose_strong_semilattice(
    const FiniteSemigroup& s, std::string* why) {
  note_op("decompose_strong_semilattice");
  if (s.size() == 0) {
    if (why) *why = "empty semigroup";
    return std::nullopt;
  }
  std::string clifford_why;
  if (auto d = decompose_clifford(s, &clifford_why)) return d;
  BandClass bc = band_class(s);
  if (bc == BandClass::NormalBand || bc == BandClass::RectangularBand ||
      bc == BandClass::Semilattice) {
    return decompose_normal_band(s, why);
  }
  if (why) *why = "neither Clifford (" + clifford_why + ") nor a normal band";
  return std::nullopt;
}

// ---------------------------------------------------------------------------

FiniteSemigroup trivial_group() { return cyclic_group(1); }

FiniteSemigroup cyclic_group(unsigned n) {
  if (n == 0) throw ValidationError("cyclic group of order zero");
  std::vector<std::string> labels;
  std::vector<std::vector<Element>> table(n, std::vector<Element>(n));
  for (Element i = 0; i < n; ++i) {
    labels.push_back(i == 0 ? "1" : (i == 1 ? "g" : "g" + std::to_string(i)));
    for (Element j = 0; j < n; ++j) table[i][j] = (i + j) % n;
  }
  return FiniteSemigroup::validate(std::move(labels), table);
}

FiniteSemigroup symmetric_group_3() {
  std::vector<std::array<int, 3>> perms;
  std::array<int, 3> p{0, 1, 2};
  do {
    perms.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  std::vector<std::string> labels;
  for (const auto& q : perms) {
    labels.push_back(std::string{char('1' + q[0]), char('1' + q[1]), char('1' + q[2])});
  }
  std::vector<std::vector<Element>> table(6, std::vector<Element>(6));
  for (Element a = 0; a < 6; ++a) {
    for (Element b = 0; b < 6; ++b) {
      // (a b)(i) = a(b(i))
      std::array<int, 3> c{};
      for (int i = 0; i < 3; ++i) c[i] = perms[a][perms[b][i]];
      table[a][b] = static_cast<Element>(
          std::find(perms.begin(), perms.end(), c) - perms.begin());
    }
  }
  return FiniteSemigroup::validate(std::move(labels), table);
}

FiniteSemigroup rectangular_band(unsigned rows, unsigned cols) {
  if (rows == 0 || cols == 0) throw ValidationError("empty rectangular band");
  const Element n = rows * cols;
  std::vector<std::string> labels;
  std::vector<std::vector<Element>> table(n, std::vector<Element>(n));
  for (Element x = 0; x < n; ++x) {
    labels.push_back("(" + std::to_string(x / cols) + "," + std::to_string(x % cols) + ")");
    for (Element y = 0; y < n; ++y) table[x][y] = (x / cols) * cols + (y % cols);
  }
  return FiniteSemigroup::validate(std::move(labels), table);
}

}  // namespace semihoch
