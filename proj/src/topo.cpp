#include "stonean/topo.hpp"

#include <algorithm>
#include <set>

#include "stonean/error.hpp"

namespace stonean::topo {

namespace {

std::vector<Subset> minimal_nonempty(const std::vector<Subset>& family) {
  std::vector<Subset> out;
  for (Subset u : family) {
    if (u.empty()) continue;
    bool minimal = true;
    for (Subset v : family)
      if (!v.empty() && v != u && v.subset_of(u)) minimal = false;
    if (minimal) out.push_back(u);
  }
  return out;
}

std::vector<std::string> set_labels(const FinTop& x, const std::vector<Subset>& sets) {
  std::vector<std::string> out;
  for (Subset s : sets) out.push_back(x.format(s));
  return out;
}

}  // namespace

Subset ROAlgebra::to_set(Subset e) const {
  Subset u;
  e.for_each([&](int a) { u |= atom_sets[a]; });
  return space.regularize(u);
}

Subset ROAlgebra::from_set(Subset u) const {
  Subset e;
  for (int a = 0; a < static_cast<int>(atom_sets.size()); ++a)
    if (atom_sets[a].subset_of(u)) e = e.with(a);
  if (to_set(e) != u) throw PreconditionError(space.format(u) + " is not regular open");
  return e;
}

ROAlgebra ro_algebra(const FinTop& x) {
  auto atoms = minimal_nonempty(x.regular_opens());
  return ROAlgebra{x, balg::mk_powerset(set_labels(x, atoms)), atoms};
}

std::string check_ro_laws(const ROAlgebra& ro) {
  const FinTop& x = ro.space;
  const auto regs = x.regular_opens();
  const Subset all = x.full();
  if (regs.size() != ro.algebra.element_count()) return "element count differs from the number of regular opens";
  for (Subset u : regs) {
    if (ro.to_set(ro.from_set(u)) != u) return "dictionary round trip at " + x.format(u);
    if (ro.meet(u, ro.negate(u)) != Subset{}) return "u ∧ ¬u ≠ 0 at " + x.format(u);
    if (ro.join(u, ro.negate(u)) != all) return "u ∨ ¬u ≠ 1 at " + x.format(u);
    if (!x.is_regular_open(ro.negate(u))) return "¬u not regular at " + x.format(u);
    for (Subset v : regs) {
      const Subset eu = ro.from_set(u), ev = ro.from_set(v);
      if (ro.to_set(eu | ev) != ro.join(u, v)) return "join disagrees with atoms at " + x.format(u) + ", " + x.format(v);
      if (ro.to_set(eu & ev) != ro.meet(u, v)) return "meet disagrees with atoms at " + x.format(u) + ", " + x.format(v);
      for (Subset w : regs)
        if (ro.meet(u, ro.join(v, w)) != ro.join(ro.meet(u, v), ro.meet(u, w)))
          return "distributivity at " + x.format(u) + ", " + x.format(v) + ", " + x.format(w);
    }
    if (ro.to_set(ro.from_set(u).complement(ro.algebra.atom_count())) != ro.negate(u))
      return "complement disagrees with atoms at " + x.format(u);
  }
  // Every subfamily: Reg of the union is its least upper bound among the regular opens.
  if (regs.size() > 20) return {};
  const std::uint64_t families = std::uint64_t{1} << regs.size();
  for (std::uint64_t m = 0; m < families; ++m) {
    Subset uni;
    Subset(m).for_each([&](int k) { uni |= regs[k]; });
    const Subset sup = x.regularize(uni);
    if (!x.is_regular_open(sup)) return "Reg of a union is not regular open";
    for (Subset ub : regs)
      if (uni.subset_of(ub) && !sup.subset_of(ub)) return "Reg of a union is not the least upper bound";
  }
  return {};
}

Subset ClopAlgebra::to_set(Subset e) const {
  Subset u;
  e.for_each([&](int a) { u |= atom_sets[a]; });
  return u;
}

std::vector<Subset> clopens(const FinTop& x) {
  std::vector<Subset> out;
  for (Subset u : x.opens())
    if (x.is_closed(u)) out.push_back(u);
  return out;
}

ClopAlgebra clop_algebra(const FinTop& x) {
  auto atoms = minimal_nonempty(clopens(x));
  return ClopAlgebra{x, balg::mk_powerset(set_labels(x, atoms)), atoms};
}

bool is_extremally_disconnected(const FinTop& x) { return clopens(x) == x.regular_opens(); }

bool Completion::order_preserving() const {
  for (int p = 0; p < poset.size(); ++p)
    for (int q = 0; q < poset.size(); ++q)
      if (poset.leq(p, q) && !e[p].leq(e[q])) return false;
  return true;
}

bool Completion::incompatibility_preserving() const {
  for (int p = 0; p < poset.size(); ++p)
    for (int q = 0; q < poset.size(); ++q)
      if (!poset.compatible(p, q) && !(e[p] & e[q]).is_bottom()) return false;
  return true;
}

bool Completion::dense() const {
  for (const auto& b : ro.algebra.elements()) {
    if (b.is_bottom()) continue;
    bool below = std::any_of(e.begin(), e.end(), [&](const balg::Elem& ep) { return ep.leq(b); });
    if (!below) return false;
  }
  return true;
}

Completion boolean_completion(const FinPoset& p) {
  ROAlgebra ro = ro_algebra(down_topology(p));
  std::vector<balg::Elem> e;
  for (int x = 0; x < p.size(); ++x) e.push_back(ro.elem(ro.space.regularize(p.down(x))));
  return Completion{p, ro, e};
}

Subset InducedHom::reg_image(Subset v) const { return map.target.regularize(map.image(v)); }

std::optional<Subset> InducedHom::preimage_identity_failure() const {
  return topo::preimage_identity_failure(map);
}

std::optional<Subset> InducedHom::adjoint_mismatch() const {
  for (const auto& v : ro_source.algebra.elements()) {
    Subset adj = ro_target.to_set(hom.left_adjoint(v.bits()));
    if (adj != reg_image(ro_source.to_set(v))) return ro_source.to_set(v);
  }
  return std::nullopt;
}

std::optional<Subset> preimage_identity_failure(const ContMap& f) {
  for (Subset u : f.target.opens())
    if (f.source.regularize(f.preimage(u)) != f.preimage(f.target.regularize(u))) return u;
  return std::nullopt;
}

InducedHom induced_ro_hom(const ContMap& f) {
  if (static_cast<int>(f.fn.size()) != f.source.size()) throw InputError("map is not total on its source");
  for (int y : f.fn)
    if (y < 0 || y >= f.target.size()) throw InputError("map value outside the target");
  if (auto u = f.continuity_failure())
    throw PreconditionError("map is not continuous: preimage of open " + f.target.format(*u) + " is not open");
  if (auto u = f.openness_failure())
    throw PreconditionError("map is not open: image of open " + f.source.format(*u) + " is " +
                            f.target.format(f.image(*u)) + ", which is not open");
  ROAlgebra rs = ro_algebra(f.source), rt = ro_algebra(f.target);
  std::vector<Subset> table;
  for (std::uint64_t b = 0; b < rt.algebra.element_count(); ++b)
    table.push_back(rs.from_set(f.preimage(rt.to_set(Subset(b)))));
  balg::BAHom h = balg::BAHom::from_function(rt.algebra, rs.algebra, table);
  return InducedHom{f, rs, rt, h};
}

bool is_dense(const FinTop& x, Subset a) { return x.closure(a) == x.full(); }

bool is_nowhere_dense(const FinTop& x, Subset a) { return x.regularize(a).empty(); }

bool is_dense_covering(const FinTop& x, const std::vector<Subset>& family, Subset u) {
  for (Subset v : x.nonempty_opens()) {
    if (!v.subset_of(u)) continue;
    // In a finite space two opens have a nonempty open common refinement iff they meet.
    bool met = std::any_of(family.begin(), family.end(), [&](Subset w) { return w.intersects(v); });
    if (!met) return false;
  }
  return true;
}

std::vector<FinTop> all_topologies(int n) {
  if (n < 1 || n > 4) throw PreconditionError("topology enumeration supports 1 to 4 points");
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (a != b) pairs.emplace_back(a, b);
  std::vector<std::string> labels;
  for (int i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  std::vector<FinTop> out;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << pairs.size()); ++m) {
    // below[x] = U_x: the points y with y in every open around x.
    std::vector<Subset> below(n);
    for (int x = 0; x < n; ++x) below[x] = Subset::singleton(x);
    for (std::size_t k = 0; k < pairs.size(); ++k)
      if (m >> k & 1) below[pairs[k].second] = below[pairs[k].second].with(pairs[k].first);
    bool transitive = true;
    for (int x = 0; x < n && transitive; ++x)
      below[x].for_each([&](int y) { transitive = transitive && below[y].subset_of(below[x]); });
    if (transitive) out.push_back(FinTop::generated(labels, below));
  }
  return out;
}

std::vector<FinPoset> all_posets(int n) {
  if (n < 1 || n > 4) throw PreconditionError("poset enumeration supports 1 to 4 elements");
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (a != b) pairs.emplace_back(a, b);
  std::vector<std::string> labels;
  for (int i = 0; i < n; ++i) labels.push_back("p" + std::to_string(i));
  std::vector<FinPoset> out;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << pairs.size()); ++m) {
    std::vector<std::vector<bool>> le(n, std::vector<bool>(n, false));
    for (int i = 0; i < n; ++i) le[i][i] = true;
    std::vector<std::pair<int, int>> chosen;
    for (std::size_t k = 0; k < pairs.size(); ++k)
      if (m >> k & 1) {
        le[pairs[k].first][pairs[k].second] = true;
        chosen.push_back(pairs[k]);
      }
    bool ok = true;
    for (int a = 0; a < n && ok; ++a)
      for (int b = 0; b < n && ok; ++b) {
        if (a != b && le[a][b] && le[b][a]) ok = false;
        for (int c = 0; c < n && ok; ++c)
          if (le[a][b] && le[b][c] && !le[a][c]) ok = false;
      }
    if (ok) out.emplace_back(labels, chosen);
  }
  return out;
}

}  // namespace stonean::topo
