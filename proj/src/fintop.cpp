#include "stonean/fintop.hpp"

#include <algorithm>
#include <set>

#include "stonean/error.hpp"

namespace stonean::topo {

namespace {

void check_labels(const std::vector<std::string>& labels, const char* what) {
  if (labels.empty()) throw InputError(std::string(what) + ": empty carrier");
  if (labels.size() > static_cast<std::size_t>(kMaxPoints))
    throw InputError(std::string(what) + ": more than 64 points");
  std::set<std::string> seen;
  for (const auto& l : labels) {
    if (l.empty()) throw InputError(std::string(what) + ": empty label");
    if (!seen.insert(l).second) throw InputError(std::string(what) + ": duplicate label " + l);
  }
}

}  // namespace

FinTop FinTop::from_opens(std::vector<std::string> points, const std::vector<Subset>& opens) {
  check_labels(points, "topology");
  const int n = static_cast<int>(points.size());
  const Subset all = Subset::full(n);
  std::set<Subset> family(opens.begin(), opens.end());
  for (Subset u : family)
    if (!u.subset_of(all)) throw InputError("topology: open set " + format_subset(u, points) + " is not a subset of the points");
  if (!family.count(Subset{})) throw InputError("topology: empty set missing from opens");
  if (!family.count(all)) throw InputError("topology: full set missing from opens");
  for (Subset u : family)
    for (Subset v : family) {
      if (!family.count(u | v))
        throw InputError("topology: union of " + format_subset(u, points) + " and " + format_subset(v, points) + " is not open");
      if (!family.count(u & v))
        throw InputError("topology: intersection of " + format_subset(u, points) + " and " + format_subset(v, points) + " is not open");
    }
  FinTop t;
  t.points_ = std::move(points);
  t.min_nbhd_.assign(n, all);
  for (Subset u : family)
    u.for_each([&](int x) { t.min_nbhd_[x] &= u; });
  return t;
}

FinTop FinTop::generated(std::vector<std::string> points, const std::vector<Subset>& subbase) {
  check_labels(points, "topology");
  const int n = static_cast<int>(points.size());
  FinTop t;
  t.points_ = std::move(points);
  t.min_nbhd_.assign(n, Subset::full(n));
  for (Subset u : subbase) {
    if (!u.subset_of(Subset::full(n))) throw InputError("topology: generator is not a subset of the points");
    u.for_each([&](int x) { t.min_nbhd_[x] &= u; });
  }
  return t;
}

FinTop FinTop::discrete(std::vector<std::string> points) {
  check_labels(points, "topology");
  FinTop t;
  const int n = static_cast<int>(points.size());
  t.points_ = std::move(points);
  for (int i = 0; i < n; ++i) t.min_nbhd_.push_back(Subset::singleton(i));
  return t;
}

int FinTop::point_index(const std::string& label) const {
  auto it = std::find(points_.begin(), points_.end(), label);
  return it == points_.end() ? -1 : static_cast<int>(it - points_.begin());
}

void FinTop::check_subset(Subset a) const {
  if (!a.subset_of(full())) throw PreconditionError("subset is not contained in the point set");
}

bool FinTop::is_open(Subset a) const {
  check_subset(a);
  bool ok = true;
  a.for_each([&](int x) { ok = ok && min_nbhd_[x].subset_of(a); });
  return ok;
}

bool FinTop::is_discrete() const {
  for (int x = 0; x < size(); ++x)
    if (min_nbhd_[x] != Subset::singleton(x)) return false;
  return true;
}

Subset FinTop::interior(Subset a) const {
  check_subset(a);
  Subset out;
  for (int x = 0; x < size(); ++x)
    if (min_nbhd_[x].subset_of(a)) out = out.with(x);
  return out;
}

Subset FinTop::closure(Subset a) const {
  check_subset(a);
  Subset out;
  for (int x = 0; x < size(); ++x)
    if (min_nbhd_[x].intersects(a)) out = out.with(x);
  return out;
}

Subset FinTop::regularize(Subset a) const { return interior(closure(a)); }

Subset FinTop::regularize_by_density(Subset a) const {
  check_subset(a);
  // Brute force over all opens U: x qualifies if x ∈ U and Cl(A∩U) ⊇ U.
  Subset out;
  for (Subset u : opens())
    if (!u.empty() && u.subset_of(closure(a & u))) out |= u;
  return out;
}

std::vector<Subset> FinTop::opens() const {
  if (size() > 20) throw PreconditionError("open-set enumeration is limited to 20 points");
  std::set<Subset> found{Subset{}};
  std::vector<Subset> frontier{Subset{}};
  while (!frontier.empty()) {
    Subset u = frontier.back();
    frontier.pop_back();
    for (int x = 0; x < size(); ++x) {
      Subset v = u | min_nbhd_[x];
      if (found.insert(v).second) frontier.push_back(v);
    }
  }
  return {found.begin(), found.end()};
}

std::vector<Subset> FinTop::nonempty_opens() const {
  std::vector<Subset> out;
  for (Subset u : opens())
    if (!u.empty()) out.push_back(u);
  std::stable_sort(out.begin(), out.end(), [](Subset a, Subset b) { return a.size() < b.size(); });
  return out;
}

std::vector<Subset> FinTop::regular_opens() const {
  std::vector<Subset> out;
  for (Subset u : opens())
    if (regularize(u) == u) out.push_back(u);
  return out;
}

FinPoset::FinPoset(std::vector<std::string> elements, const std::vector<std::pair<int, int>>& pairs) {
  check_labels(elements, "poset");
  const int n = static_cast<int>(elements.size());
  elements_ = std::move(elements);
  down_.resize(n);
  for (int p = 0; p < n; ++p) down_[p] = Subset::singleton(p);
  for (auto [a, b] : pairs) {
    if (a < 0 || b < 0 || a >= n || b >= n) throw InputError("poset: relation refers to an unknown element");
    down_[b] = down_[b].with(a);
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (int p = 0; p < n; ++p) {
      Subset d = down(down_[p]);
      if (d != down_[p]) {
        down_[p] = d;
        changed = true;
      }
    }
  }
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (leq(a, b) && leq(b, a))
        throw InputError("poset: antisymmetry fails for " + elements_[a] + " and " + elements_[b]);
}

int FinPoset::index_of(const std::string& label) const {
  auto it = std::find(elements_.begin(), elements_.end(), label);
  return it == elements_.end() ? -1 : static_cast<int>(it - elements_.begin());
}

Subset FinPoset::down(Subset x) const {
  Subset out = x;
  x.for_each([&](int p) { out |= down_[p]; });
  return out;
}

FinTop down_topology(const FinPoset& p) {
  std::vector<Subset> gens;
  for (int x = 0; x < p.size(); ++x) gens.push_back(p.down(x));
  return FinTop::generated(p.elements(), gens);
}

Subset ContMap::image(Subset a) const {
  Subset out;
  a.for_each([&](int x) { out = out.with(fn[x]); });
  return out;
}

Subset ContMap::preimage(Subset b) const {
  Subset out;
  for (int x = 0; x < source.size(); ++x)
    if (b.contains(fn[x])) out = out.with(x);
  return out;
}

std::optional<Subset> ContMap::continuity_failure() const {
  for (Subset u : target.opens())
    if (!source.is_open(preimage(u))) return u;
  return std::nullopt;
}

std::optional<Subset> ContMap::openness_failure() const {
  for (Subset u : source.opens())
    if (!target.is_open(image(u))) return u;
  return std::nullopt;
}

}  // namespace stonean::topo
