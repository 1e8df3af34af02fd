#include "stonean/sheaf.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "stonean/error.hpp"

namespace stonean::sheaf {

using topo::FinTop;

// ---------------------------------------------------------------- presheaves

int Presheaf::level_index(Subset u) const {
  auto it = std::find(levels.begin(), levels.end(), u);
  return it == levels.end() ? -1 : static_cast<int>(it - levels.begin());
}

int Presheaf::section_index(int level, const std::string& id) const {
  const auto& s = sections[level];
  auto it = std::find(s.begin(), s.end(), id);
  return it == s.end() ? -1 : static_cast<int>(it - s.begin());
}

std::string Presheaf::level_key(int q) const {
  std::string out;
  levels[q].for_each([&](int x) {
    if (!out.empty()) out += "+";
    out += space.point(x);
  });
  return out;
}

void Presheaf::check_functorial() const {
  const int n = level_count();
  for (int p = 0; p < n; ++p)
    for (int f = 0; f < static_cast<int>(sections[p].size()); ++f)
      if (restrict(p, p, f) != f)
        throw InputError("restriction " + level_key(p) + "<=" + level_key(p) + " is not the identity at " + sections[p][f]);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      if (!below(q, p)) continue;
      for (int r = 0; r < n; ++r) {
        if (!below(r, q)) continue;
        for (int f = 0; f < static_cast<int>(sections[p].size()); ++f)
          if (restrict(q, r, restrict(p, q, f)) != restrict(p, r, f))
            throw InputError("restrictions do not compose along " + level_key(r) + " <= " + level_key(q) + " <= " +
                             level_key(p) + " at " + sections[p][f]);
      }
    }
}

bool Presheaf::is_level_surjective_from_top() const {
  const int top = level_index(space.full());
  if (top < 0) return false;
  for (int q = 0; q < level_count(); ++q) {
    std::vector<bool> hit(sections[q].size(), false);
    for (int f = 0; f < static_cast<int>(sections[top].size()); ++f) hit[restrict(top, q, f)] = true;
    if (std::find(hit.begin(), hit.end(), false) != hit.end()) return false;
  }
  return true;
}

Presheaf make_presheaf(FinTop space, std::vector<Subset> levels, std::vector<std::vector<std::string>> sections,
                       const std::function<int(int, int, int)>& restrict) {
  const int n = static_cast<int>(levels.size());
  if (static_cast<int>(sections.size()) != n) throw InputError("presheaf: one section list per level is required");
  std::set<Subset> seen;
  for (Subset u : levels) {
    if (u.empty()) throw InputError("presheaf: empty level");
    if (!space.is_open(u)) throw InputError("presheaf: level " + space.format(u) + " is not open");
    if (!seen.insert(u).second) throw InputError("presheaf: duplicate level " + space.format(u));
  }
  for (const auto& s : sections) {
    std::set<std::string> ids(s.begin(), s.end());
    if (ids.size() != s.size()) throw InputError("presheaf: duplicate section id");
  }
  Presheaf f{std::move(space), std::move(levels), std::move(sections), {}, std::nullopt};
  f.res.assign(static_cast<std::size_t>(n) * n, {});
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      if (!f.below(q, p)) continue;
      auto& r = f.res[p * n + q];
      for (int s = 0; s < static_cast<int>(f.sections[p].size()); ++s) {
        int t = restrict(p, q, s);
        if (t < 0 || t >= static_cast<int>(f.sections[q].size()))
          throw InputError("presheaf: restriction " + f.level_key(q) + "<=" + f.level_key(p) + " of " +
                           f.sections[p][s] + " is undefined");
        r.push_back(t);
      }
    }
  return f;
}

std::vector<Subset> open_levels(const FinTop& x) { return x.nonempty_opens(); }

std::vector<Subset> regular_levels(const FinTop& x) {
  std::vector<Subset> out;
  for (Subset u : x.nonempty_opens())
    if (x.regularize(u) == u) out.push_back(u);
  return out;
}

Presheaf restrict_levels(const Presheaf& f, const std::vector<Subset>& keep) {
  std::vector<int> idx;
  std::vector<std::vector<std::string>> secs;
  for (Subset u : keep) {
    int i = f.level_index(u);
    if (i < 0) throw PreconditionError("presheaf has no level " + f.space.format(u));
    idx.push_back(i);
    secs.push_back(f.sections[i]);
  }
  Presheaf out = make_presheaf(f.space, keep, secs, [&](int p, int q, int s) { return f.restrict(idx[p], idx[q], s); });
  if (f.tag) {
    StructureTag t{f.tag->model, f.tag->point_atom, {}};
    for (int i : idx) t.rep.push_back(f.tag->rep[i]);
    out.tag = t;
  }
  return out;
}

// ---------------------------------------------------------------- coverings

namespace {

// meets[q][r]: some level lies inside levels[q] ∩ levels[r].
std::vector<std::vector<bool>> meets_table(const Presheaf& f) {
  const int n = f.level_count();
  std::vector<std::vector<bool>> m(n, std::vector<bool>(n, false));
  for (int q = 0; q < n; ++q)
    for (int r = 0; r < n; ++r)
      for (int s = 0; s < n && !m[q][r]; ++s)
        if (f.levels[s].subset_of(f.levels[q] & f.levels[r])) m[q][r] = true;
  return m;
}

bool covering_with(const Presheaf& f, Coverage c, int p, const std::vector<int>& members,
                   const std::vector<std::vector<bool>>& meets) {
  for (int a : members)
    if (!f.below(a, p)) return false;
  if (members.empty()) return false;
  if (c == Coverage::Dense) {
    for (int q = 0; q < f.level_count(); ++q) {
      if (!f.below(q, p)) continue;
      bool hit = std::any_of(members.begin(), members.end(), [&](int r) { return meets[q][r]; });
      if (!hit) return false;
    }
    return true;
  }
  // Supremum among the levels.
  Subset uni;
  for (int a : members) uni |= f.levels[a];
  std::vector<int> ub;
  for (int u = 0; u < f.level_count(); ++u)
    if (uni.subset_of(f.levels[u])) ub.push_back(u);
  for (int u : ub) {
    bool least = std::all_of(ub.begin(), ub.end(), [&](int v) { return f.below(u, v); });
    if (least) return u == p;
  }
  return false;
}

}  // namespace

bool is_covering(const Presheaf& f, Coverage c, int p, const std::vector<int>& members) {
  return covering_with(f, c, p, members, meets_table(f));
}

SheafReport check_coverings(const Presheaf& f, Coverage c, bool need_existence) {
  SheafReport rep;
  const int n = f.level_count();
  const auto meets = meets_table(f);
  // lower[a][b]: levels below both a and b.
  std::vector<std::vector<std::vector<int>>> lower(n, std::vector<std::vector<int>>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int s = 0; s < n; ++s)
        if (f.below(s, a) && f.below(s, b)) lower[a][b].push_back(s);

  for (int p = 0; p < n && rep.pass; ++p) {
    std::vector<int> under;
    for (int q = 0; q < n; ++q)
      if (f.below(q, p)) under.push_back(q);
    if (under.size() > 20) throw PreconditionError("too many levels below " + f.level_key(p) + " for covering enumeration");
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << under.size()) && rep.pass; ++mask) {
      std::vector<int> members;
      for (std::size_t k = 0; k < under.size(); ++k)
        if (mask >> k & 1) members.push_back(under[k]);
      if (!covering_with(f, c, p, members, meets)) continue;
      ++rep.coverings;
      const int k = static_cast<int>(members.size());
      std::vector<int> fam(k, 0);
      std::function<void(int)> rec = [&](int j) {
        if (!rep.pass) return;
        if (j == k) {
          ++rep.families;
          int count = 0;
          for (int s = 0; s < static_cast<int>(f.sections[p].size()); ++s) {
            bool ok = true;
            for (int t = 0; t < k && ok; ++t) ok = f.restrict(p, members[t], s) == fam[t];
            count += ok;
          }
          if (count > 1 || (need_existence && count == 0)) {
            rep.pass = false;
            rep.witness = CollationWitness{p, members, fam, count};
          }
          return;
        }
        const int a = members[j];
        for (int s = 0; s < static_cast<int>(f.sections[a].size()); ++s) {
          bool ok = true;
          for (int t = 0; t < j && ok; ++t) {
            const int b = members[t];
            for (int r : lower[a][b])
              if (f.restrict(a, r, s) != f.restrict(b, r, fam[t])) {
                ok = false;
                break;
              }
          }
          if (!ok) continue;
          fam[j] = s;
          rec(j + 1);
          if (!rep.pass) return;
        }
      };
      rec(0);
    }
  }
  return rep;
}

SheafReport is_separated(const Presheaf& f) { return check_coverings(f, Coverage::Dense, false); }
SheafReport is_stonean_sheaf(const Presheaf& f) { return check_coverings(f, Coverage::Dense, true); }
SheafReport is_topological_sheaf(const Presheaf& f) { return check_coverings(f, Coverage::Sup, true); }

// ---------------------------------------------------------------- étalé spaces

Subset EtaleSpace::stalk(int x) const {
  Subset s;
  for (int g = 0; g < size(); ++g)
    if (proj[g] == x) s = s.with(g);
  return s;
}

FinTop EtaleSpace::total_space() const { return FinTop::generated(germs, basic_opens); }

bool EtaleSpace::is_ed_bundle() const {
  if (!base.is_discrete()) return false;
  for (int x = 0; x < base.size(); ++x)
    if (stalk(x).empty()) return false;
  return true;
}

EtaleChecks check_etale(const EtaleSpace& e) {
  EtaleChecks c;
  const FinTop t = e.total_space();
  const int n = e.size();
  for (int g = 0; g < n && c.hausdorff; ++g)
    for (int h = g + 1; h < n && c.hausdorff; ++h) {
      bool sep = false;
      for (Subset o : e.basic_opens) {
        if (!o.contains(g)) continue;
        for (Subset p : e.basic_opens)
          if (p.contains(h) && !o.intersects(p)) sep = true;
        if (sep) break;
      }
      c.hausdorff = sep;
    }
  for (Subset o : e.basic_opens)
    if (!t.is_closed(o)) c.zero_dimensional = false;
  for (int x = 0; x < e.base.size(); ++x) {
    const Subset st = e.stalk(x);
    if (!st.empty() && !t.is_closed(st)) c.stalks_closed = false;
    st.for_each([&](int g) {
      bool iso = std::any_of(e.basic_opens.begin(), e.basic_opens.end(),
                             [&](Subset o) { return o.contains(g) && (o & st) == Subset::singleton(g); });
      if (!iso) c.stalks_discrete = false;
    });
  }
  for (Subset o : e.basic_opens) {
    Subset img;
    bool inj = true;
    o.for_each([&](int g) {
      if (img.contains(e.proj[g])) inj = false;
      img = img.with(e.proj[g]);
    });
    if (!inj || !e.base.is_open(img)) {
      c.local_homeomorphism = false;
      continue;
    }
    o.for_each([&](int g) {
      Subset nb;
      (t.min_nbhd(g) & o).for_each([&](int h) { nb = nb.with(e.proj[h]); });
      if (nb != (e.base.min_nbhd(e.proj[g]) & img)) c.local_homeomorphism = false;
    });
  }
  return c;
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
  void unite(int a, int b) {
    a = find(a), b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

// Builds germs at each base point from the members (level, section) and an
// equivalence test, then basic opens from `opens(level, section)`.
EtaleSpace build_bundle(const FinTop& base, const Presheaf& f,
                        const std::vector<std::vector<std::pair<int, int>>>& members,
                        const std::function<bool(int x, std::pair<int, int>, std::pair<int, int>)>& equiv) {
  EtaleSpace e;
  e.base = base;
  e.germ_lookup.resize(base.size());
  for (int x = 0; x < base.size(); ++x) {
    const auto& mem = members[x];
    const int k = static_cast<int>(mem.size());
    UnionFind uf(k);
    for (int a = 0; a < k; ++a)
      for (int b = a + 1; b < k; ++b)
        if (uf.find(a) != uf.find(b) && equiv(x, mem[a], mem[b])) uf.unite(a, b);
    std::map<int, int> germ_of_root;
    for (int a = 0; a < k; ++a) {
      int root = uf.find(a);
      auto it = germ_of_root.find(root);
      if (it == germ_of_root.end()) {
        const int g = e.size();
        if (g >= kMaxPoints) throw PreconditionError("bundle has more than 64 germs");
        const auto [lv, s] = mem[root];
        e.germ_value.push_back(f.sections[lv][s]);
        e.germs.push_back(f.sections[lv][s] + "@" + base.point(x));
        e.proj.push_back(x);
        e.germ_rep.push_back(mem[root]);
        it = germ_of_root.emplace(root, g).first;
      }
      e.germ_lookup[x][mem[a]] = it->second;
    }
  }
  return e;
}

void add_basic_open(EtaleSpace& e, std::set<Subset>& seen, Subset o, std::pair<int, int> from) {
  if (!o.empty() && seen.insert(o).second) {
    e.basic_opens.push_back(o);
    e.provenance.push_back(from);
  }
}

}  // namespace

EtaleSpace lambda0(const Presheaf& f) {
  const FinTop& x = f.space;
  std::vector<std::vector<std::pair<int, int>>> members(x.size());
  for (int pt = 0; pt < x.size(); ++pt)
    for (int u = 0; u < f.level_count(); ++u)
      if (f.levels[u].contains(pt))
        for (int s = 0; s < static_cast<int>(f.sections[u].size()); ++s) members[pt].emplace_back(u, s);
  auto equiv = [&](int pt, std::pair<int, int> a, std::pair<int, int> b) {
    const Subset both = f.levels[a.first] & f.levels[b.first];
    for (int w = 0; w < f.level_count(); ++w)
      if (f.levels[w].contains(pt) && f.levels[w].subset_of(both) &&
          f.restrict(a.first, w, a.second) == f.restrict(b.first, w, b.second))
        return true;
    return false;
  };
  EtaleSpace e = build_bundle(x, f, members, equiv);
  std::set<Subset> seen;
  for (int u = 0; u < f.level_count(); ++u)
    for (int s = 0; s < static_cast<int>(f.sections[u].size()); ++s) {
      Subset o;
      f.levels[u].for_each([&](int pt) { o = o.with(e.germ_lookup[pt].at({u, s})); });
      add_basic_open(e, seen, o, {u, s});
    }
  return e;
}

namespace {

// All maps choosing, for each point of u, a value in choices[point]; calls fn on each.
void for_each_choice(const std::vector<int>& points, const std::vector<std::vector<int>>& choices,
                     const std::function<void(const std::vector<int>&)>& fn) {
  const int k = static_cast<int>(points.size());
  for (int i = 0; i < k; ++i)
    if (choices[i].empty()) return;
  std::vector<int> idx(k, 0), val(k);
  while (true) {
    for (int i = 0; i < k; ++i) val[i] = choices[i][idx[i]];
    fn(val);
    int p = k - 1;
    while (p >= 0 && ++idx[p] == static_cast<int>(choices[p].size())) idx[p--] = 0;
    if (p < 0) return;
  }
}

}  // namespace

std::vector<std::vector<int>> gamma0(const EtaleSpace& e, Subset u) {
  if (u.empty() || !e.base.is_open(u)) throw PreconditionError("sections are taken over nonempty open sets");
  const auto pts = u.members();
  std::vector<std::vector<int>> choices;
  for (int x : pts) choices.push_back(e.stalk(x).members());
  std::vector<std::vector<int>> out;
  for_each_choice(pts, choices, [&](const std::vector<int>& s) {
    for (Subset o : e.basic_opens) {
      Subset pre;
      for (std::size_t i = 0; i < pts.size(); ++i)
        if (o.contains(s[i])) pre = pre.with(pts[i]);
      if (!e.base.is_open(pre)) return;
    }
    out.push_back(s);
  });
  return out;
}

std::optional<std::vector<int>> gamma0_first(const EtaleSpace& e, Subset u) {
  if (u.empty() || !e.base.is_open(u)) throw PreconditionError("sections are taken over nonempty open sets");
  const auto pts = u.members();
  std::vector<std::vector<int>> choices;
  for (int x : pts) choices.push_back(e.stalk(x).members());
  std::optional<std::vector<int>> found;
  for_each_choice(pts, choices, [&](const std::vector<int>& s) {
    if (found) return;
    for (Subset o : e.basic_opens) {
      Subset pre;
      for (std::size_t i = 0; i < pts.size(); ++i)
        if (o.contains(s[i])) pre = pre.with(pts[i]);
      if (!e.base.is_open(pre)) return;
    }
    found = s;
  });
  return found;
}

EtaleSpace lambda1(const Presheaf& f) {
  const FinTop& x = f.space;
  const topo::ROAlgebra ro = topo::ro_algebra(x);
  const balg::StoneSpace st = balg::stone_space(ro.algebra);
  const int atoms = ro.algebra.atom_count();
  const int n = f.level_count();
  std::vector<Subset> reg(n);
  for (int u = 0; u < n; ++u) reg[u] = x.regularize(f.levels[u]);
  const auto meets = meets_table(f);

  // Ḡ at atom a: levels whose regularisation contains the atom's set.
  std::vector<std::vector<std::pair<int, int>>> members(atoms);
  std::vector<std::vector<int>> gbar(atoms);
  for (int a = 0; a < atoms; ++a)
    for (int u = 0; u < n; ++u)
      if (ro.atom_sets[a].subset_of(reg[u])) {
        gbar[a].push_back(u);
        for (int s = 0; s < static_cast<int>(f.sections[u].size()); ++s) members[a].emplace_back(u, s);
      }

  auto equiv = [&](int a, std::pair<int, int> p, std::pair<int, int> q) {
    const Subset both = f.levels[p.first] & f.levels[q.first];
    std::vector<int> agree;  // D_{f,g}
    for (int v = 0; v < n; ++v)
      if (f.levels[v].subset_of(both) && f.restrict(p.first, v, p.second) == f.restrict(q.first, v, q.second))
        agree.push_back(v);
    for (int w : gbar[a]) {
      if (!f.levels[w].subset_of(both)) continue;
      bool dense = true;
      for (int r = 0; r < n && dense; ++r)
        if (f.below(r, w)) dense = std::any_of(agree.begin(), agree.end(), [&](int v) { return meets[r][v]; });
      if (dense) return true;
    }
    return false;
  };
  EtaleSpace e = build_bundle(st.space, f, members, equiv);

  const auto regs = regular_levels(x);
  std::set<Subset> seen;
  for (int u = 0; u < n; ++u)
    for (int s = 0; s < static_cast<int>(f.sections[u].size()); ++s)
      for (Subset q : regs) {
        if (!q.subset_of(reg[u])) continue;
        Subset o;
        for (int a = 0; a < atoms; ++a)
          if (ro.atom_sets[a].subset_of(q)) o = o.with(e.germ_lookup[a].at({u, s}));
        add_basic_open(e, seen, o, {u, s});
      }

  if (f.tag) {
    e.model = f.tag->model;
    e.point_atom.assign(atoms, -1);
    for (int a = 0; a < atoms; ++a) e.point_atom[a] = f.tag->point_atom[ro.atom_sets[a].first()];
    for (int g = 0; g < e.size(); ++g) {
      const auto [u, s] = e.germ_rep[g];
      const int pt = (ro.atom_sets[e.proj[g]] & f.levels[u]).first();
      e.germ_element.push_back(f.tag->rep[u][s][pt]);
    }
  }
  return e;
}

std::vector<std::vector<int>> gamma1(const EtaleSpace& e, Subset u) {
  if (!e.base.is_discrete())
    throw PreconditionError("bundle is not extremally disconnected: the finite base must be discrete");
  for (int x = 0; x < e.base.size(); ++x)
    if (e.stalk(x).empty())
      throw PreconditionError("projection image is not dense: empty stalk over " + e.base.point(x));
  if (u.empty() || !e.base.is_open(u)) throw PreconditionError("sections are taken over nonempty open sets");
  const auto pts = u.members();
  std::vector<std::vector<int>> choices;
  for (int x : pts) {
    choices.push_back(e.stalk(x).members());
    choices.back().push_back(-1);  // the point at infinity
  }
  std::vector<std::vector<int>> out;
  for_each_choice(pts, choices, [&](const std::vector<int>& s) {
    Subset at_inf;
    for (std::size_t i = 0; i < pts.size(); ++i)
      if (s[i] < 0) at_inf = at_inf.with(pts[i]);
    if (!topo::is_nowhere_dense(e.base, at_inf)) return;
    for (Subset o : e.basic_opens) {
      Subset pre;
      for (std::size_t i = 0; i < pts.size(); ++i)
        if (s[i] >= 0 && o.contains(s[i])) pre = pre.with(pts[i]);
      if (!e.base.is_open(pre)) return;
    }
    out.push_back(s);
  });
  return out;
}

Presheaf gamma_half(const EtaleSpace& e) {
  const auto levels = regular_levels(e.base);
  // Germ display names are unique within stalks unless the source presheaf reused ids.
  bool plain = true;
  for (int x = 0; x < e.base.size() && plain; ++x) {
    std::set<std::string> names;
    e.stalk(x).for_each([&](int g) { plain = plain && names.insert(e.germ_value[g]).second; });
  }
  std::vector<std::vector<std::string>> secs;
  std::vector<std::vector<std::vector<int>>> vals;
  std::vector<std::map<std::vector<int>, int>> index(levels.size());
  for (std::size_t l = 0; l < levels.size(); ++l) {
    vals.push_back(gamma1(e, levels[l]));
    secs.emplace_back();
    for (std::size_t s = 0; s < vals[l].size(); ++s) {
      std::string id = "(";
      for (std::size_t i = 0; i < vals[l][s].size(); ++i) {
        const int g = vals[l][s][i];
        id += (i ? "," : "") + (g < 0 ? std::string("∞") : plain ? e.germ_value[g] : e.germs[g]);
      }
      secs.back().push_back(id + ")");
      index[l][vals[l][s]] = static_cast<int>(s);
    }
  }
  Presheaf out = make_presheaf(e.base, levels, secs, [&](int p, int q, int s) {
    const auto pp = levels[p].members();
    std::vector<int> v;
    for (std::size_t i = 0; i < pp.size(); ++i)
      if (levels[q].contains(pp[i])) v.push_back(vals[p][s][i]);
    return index[q].at(v);
  });
  if (e.model) {
    StructureTag t{e.model, e.point_atom, {}};
    for (std::size_t l = 0; l < levels.size(); ++l) {
      t.rep.emplace_back();
      const auto pts = levels[l].members();
      for (const auto& v : vals[l]) {
        std::vector<int> r(e.base.size(), -1);
        for (std::size_t i = 0; i < pts.size(); ++i) r[pts[i]] = e.germ_element[v[i]];
        t.rep.back().push_back(r);
      }
    }
    out.tag = t;
  }
  return out;
}

// ---------------------------------------------------------------- morphisms

namespace {

void require_ro_levels(const Presheaf& f, const char* which) {
  auto regs = regular_levels(f.space);
  std::set<Subset> a(regs.begin(), regs.end()), b(f.levels.begin(), f.levels.end());
  if (a != b) throw PreconditionError(std::string(which) + " presheaf is not indexed by the nonempty regular opens");
}

// π_i of every level of `target`, as a level of `source`.
std::vector<int> pi_levels(const balg::BAHom& i, const Presheaf& source, const Presheaf& target) {
  const topo::ROAlgebra ro0 = topo::ro_algebra(source.space), ro1 = topo::ro_algebra(target.space);
  ro0.algebra.require_same(i.source());
  ro1.algebra.require_same(i.target());
  std::vector<int> out;
  for (Subset v : target.levels) {
    int l = source.level_index(ro0.to_set(i.left_adjoint(ro1.from_set(v))));
    if (l < 0) throw PreconditionError("π_i of " + target.space.format(v) + " is not a level of the source");
    out.push_back(l);
  }
  return out;
}

}  // namespace

int pi_level(const PresheafMorphism& m, int target_level) {
  return pi_levels(m.i, m.source, m.target)[target_level];
}

NaturalityReport check_presheaf_morphism(const PresheafMorphism& m) {
  require_ro_levels(m.source, "source");
  require_ro_levels(m.target, "target");
  const auto pl = pi_levels(m.i, m.source, m.target);
  const Presheaf& t = m.target;
  const Presheaf& s = m.source;
  if (static_cast<int>(m.theta.size()) != t.level_count()) throw InputError("one component per target level is required");
  for (int v = 0; v < t.level_count(); ++v) {
    if (m.theta[v].size() != s.sections[pl[v]].size()) throw InputError("component at " + t.level_key(v) + " is not total");
    for (int y : m.theta[v])
      if (y < 0 || y >= static_cast<int>(t.sections[v].size())) throw InputError("component at " + t.level_key(v) + " leaves the target");
  }
  NaturalityReport rep;
  for (int v = 0; v < t.level_count(); ++v)
    for (int w = 0; w < t.level_count(); ++w) {
      if (!t.below(w, v)) continue;
      for (int f = 0; f < static_cast<int>(s.sections[pl[v]].size()); ++f)
        if (m.theta[w][s.restrict(pl[v], pl[w], f)] != t.restrict(v, w, m.theta[v][f])) {
          rep.pass = false;
          rep.square = std::make_pair(w, v);
          return rep;
        }
    }
  return rep;
}

Presheaf lift_i_star(const balg::BAHom& i, const Presheaf& f, const FinTop& x1) {
  require_ro_levels(f, "lifted");
  const auto levels = regular_levels(x1);
  Presheaf shape = make_presheaf(x1, levels, std::vector<std::vector<std::string>>(levels.size()),
                                 [](int, int, int) { return 0; });
  const auto pl = pi_levels(i, f, shape);
  std::vector<std::vector<std::string>> secs;
  for (int l : pl) secs.push_back(f.sections[l]);
  return make_presheaf(x1, levels, secs, [&](int p, int q, int s) { return f.restrict(pl[p], pl[q], s); });
}

PresheafMorphism compose(const PresheafMorphism& g, const PresheafMorphism& f) {
  const auto pg = pi_levels(g.i, g.source, g.target);
  PresheafMorphism out{f.source, g.target, balg::compose(g.i, f.i), {}};
  for (int v = 0; v < g.target.level_count(); ++v) {
    const int w = pg[v];
    std::vector<int> th;
    for (int y : f.theta[w]) th.push_back(g.theta[v][y]);
    out.theta.push_back(th);
  }
  return out;
}

bool same_morphism(const PresheafMorphism& a, const PresheafMorphism& b) {
  return a.i == b.i && a.theta == b.theta;
}

Presheaf ext(const Presheaf& g) {
  require_ro_levels(g, "extended");
  const FinTop& x = g.space;
  const auto levels = open_levels(x);
  std::vector<int> at;
  std::vector<std::vector<std::string>> secs;
  for (Subset u : levels) {
    at.push_back(g.level_index(x.regularize(u)));
    secs.push_back(g.sections[at.back()]);
  }
  return make_presheaf(x, levels, secs, [&](int p, int q, int s) { return g.restrict(at[p], at[q], s); });
}

Sheafification sheafify(const Presheaf& f) {
  EtaleSpace e = lambda1(f);
  if (!e.is_ed_bundle()) throw PreconditionError("presheaf has an empty stalk; its bundle is not extremally disconnected");
  Presheaf s = gamma_half(e);
  Presheaf src = restrict_levels(f, regular_levels(f.space));
  const topo::ROAlgebra ro0 = topo::ro_algebra(f.space), ro1 = topo::ro_algebra(e.base);
  std::vector<int> ident(ro1.algebra.atom_count());
  std::iota(ident.begin(), ident.end(), 0);
  balg::BAHom iota(ro0.algebra, ro1.algebra, ident);
  const auto pl = pi_levels(iota, src, s);
  std::vector<std::vector<int>> theta;
  for (int v = 0; v < s.level_count(); ++v) {
    const int fl = f.level_index(src.levels[pl[v]]);
    const auto secs = gamma1(e, s.levels[v]);
    std::map<std::vector<int>, int> idx;
    for (std::size_t k = 0; k < secs.size(); ++k) idx[secs[k]] = static_cast<int>(k);
    std::vector<int> th;
    for (int sec = 0; sec < static_cast<int>(src.sections[pl[v]].size()); ++sec) {
      std::vector<int> germs;
      s.levels[v].for_each([&](int a) { germs.push_back(e.germ_lookup[a].at({fl, sec})); });
      th.push_back(idx.at(germs));
    }
    theta.push_back(th);
  }
  return Sheafification{e, s, PresheafMorphism{src, s, iota, theta}};
}

std::vector<int> level_map_by_points(const Presheaf& a, const Presheaf& b, const std::vector<int>& point_map) {
  std::vector<int> out;
  for (Subset u : a.levels) {
    Subset img;
    u.for_each([&](int x) { img = img.with(point_map[x]); });
    out.push_back(b.level_index(img));
  }
  return out;
}

std::optional<std::vector<std::vector<int>>> find_presheaf_isomorphism(const Presheaf& a, const Presheaf& b,
                                                                       const std::vector<int>& level_map) {
  const int n = a.level_count();
  if (b.level_count() != n || static_cast<int>(level_map.size()) != n) return std::nullopt;
  std::set<int> distinct(level_map.begin(), level_map.end());
  if (distinct.size() != static_cast<std::size_t>(n) || distinct.count(-1)) return std::nullopt;
  for (int p = 0; p < n; ++p) {
    if (a.sections[p].size() != b.sections[level_map[p]].size()) return std::nullopt;
    for (int q = 0; q < n; ++q)
      if (a.below(q, p) != b.below(level_map[q], level_map[p])) return std::nullopt;
  }
  // Invariant of a section: how many sections of each larger level restrict onto it.
  auto profile = [](const Presheaf& f, int q, int s, const std::vector<int>& order) {
    std::vector<int> pr;
    for (int p : order) {
      if (p == q || !f.below(q, p)) continue;
      int c = 0;
      for (int t : f.restriction(p, q)) c += t == s;
      pr.push_back(c);
    }
    return pr;
  };
  std::vector<int> order(n), border(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return a.levels[x].size() < a.levels[y].size(); });
  for (int i = 0; i < n; ++i) border[i] = level_map[order[i]];

  std::vector<std::vector<int>> phi(n);
  for (int p = 0; p < n; ++p) phi[p].assign(a.sections[p].size(), -1);
  std::vector<std::vector<bool>> used(n);
  for (int p = 0; p < n; ++p) used[p].assign(a.sections[p].size(), false);
  std::vector<std::pair<int, int>> slots;
  for (int p : order)
    for (int s = 0; s < static_cast<int>(a.sections[p].size()); ++s) slots.emplace_back(p, s);
  std::map<std::pair<int, int>, std::vector<int>> prof_a, prof_b;
  for (int p = 0; p < n; ++p)
    for (int s = 0; s < static_cast<int>(a.sections[p].size()); ++s) {
      prof_a[{p, s}] = profile(a, p, s, order);
      prof_b[{p, s}] = profile(b, level_map[p], s, border);
    }
  std::vector<bool> done(n, false);
  std::function<bool(std::size_t)> rec = [&](std::size_t k) {
    if (k == slots.size()) return true;
    const auto [p, s] = slots[k];
    const int bp = level_map[p];
    for (int t = 0; t < static_cast<int>(b.sections[bp].size()); ++t) {
      if (used[p][t] || prof_a[{p, s}] != prof_b[{p, t}]) continue;
      bool ok = true;
      for (int q = 0; q < n && ok; ++q)
        if (q != p && a.below(q, p) && phi[q][a.restrict(p, q, s)] >= 0)
          ok = phi[q][a.restrict(p, q, s)] == b.restrict(bp, level_map[q], t);
      if (!ok) continue;
      phi[p][s] = t, used[p][t] = true;
      if (rec(k + 1)) return true;
      phi[p][s] = -1, used[p][t] = false;
    }
    return false;
  };
  if (!rec(0)) return std::nullopt;
  return phi;
}

std::vector<PresheafMorphism> all_morphisms(const Presheaf& f, const Presheaf& s) {
  require_ro_levels(f, "source");
  require_ro_levels(s, "target");
  const topo::ROAlgebra ro0 = topo::ro_algebra(f.space), ro1 = topo::ro_algebra(s.space);
  const int m = ro0.algebra.atom_count(), n = ro1.algebra.atom_count();
  std::vector<PresheafMorphism> out;
  std::vector<int> amap(n, 0);
  while (true) {
    balg::BAHom i(ro0.algebra, ro1.algebra, amap);
    const auto pl = pi_levels(i, f, s);
    const int L = s.level_count();
    std::vector<std::vector<int>> theta(L);
    std::function<void(int)> rec = [&](int v) {
      if (v == L) {
        out.push_back(PresheafMorphism{f, s, i, theta});
        return;
      }
      const int dom = static_cast<int>(f.sections[pl[v]].size());
      const int cod = static_cast<int>(s.sections[v].size());
      if (dom > 0 && cod == 0) return;
      theta[v].assign(dom, 0);
      while (true) {
        bool ok = true;
        for (int w = 0; w < v && ok; ++w) {
          if (s.below(w, v)) {
            for (int x = 0; x < dom && ok; ++x)
              ok = theta[w][f.restrict(pl[v], pl[w], x)] == s.restrict(v, w, theta[v][x]);
          } else if (s.below(v, w)) {
            for (int x = 0; x < static_cast<int>(f.sections[pl[w]].size()) && ok; ++x)
              ok = theta[v][f.restrict(pl[w], pl[v], x)] == s.restrict(w, v, theta[w][x]);
          }
        }
        if (ok) rec(v + 1);
        int p = dom - 1;
        while (p >= 0 && ++theta[v][p] == cod) theta[v][p--] = 0;
        if (p < 0) break;
      }
    };
    rec(0);
    int p = n - 1;
    while (p >= 0 && ++amap[p] == m) amap[p--] = 0;
    if (p < 0) break;
  }
  return out;
}

UniversalReport check_universal_property(const Presheaf& f, const Presheaf& s) {
  UniversalReport rep;
  if (!is_stonean_sheaf(s).pass) throw PreconditionError("target of the universal property must be a stonean sheaf");
  const Sheafification sh = sheafify(f);
  const auto from_f = all_morphisms(sh.unit.source, s);
  const auto from_sheaf = all_morphisms(sh.sheaf, s);
  rep.morphisms = from_f.size();
  for (std::size_t k = 0; k < from_f.size() && rep.pass; ++k) {
    int factorizations = 0;
    for (const auto& g : from_sheaf)
      if (same_morphism(compose(g, sh.unit), from_f[k])) ++factorizations;
    if (factorizations != 1) {
      rep.pass = false;
      rep.failure = "morphism #" + std::to_string(k) + " has " + std::to_string(factorizations) + " factorizations";
    }
  }
  return rep;
}

Presheaf random_presheaf(const FinTop& x, const std::vector<Subset>& levels, int max_stalk, double dup,
                         std::mt19937_64& rng, int max_sections) {
  const int n = static_cast<int>(levels.size());
  std::vector<int> stalk(x.size());
  for (auto& s : stalk) s = std::uniform_int_distribution<int>(1, max_stalk)(rng);
  // A section is a value per point of the whole space (unused points = -1) plus a copy tag.
  using Sec = std::pair<std::vector<int>, int>;
  std::vector<std::vector<Sec>> secs(n);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return levels[a].size() > levels[b].size(); });
  auto cut = [&](const std::vector<int>& v, Subset u) {
    std::vector<int> w(v.size(), -1);
    u.for_each([&](int pt) { w[pt] = v[pt]; });
    return w;
  };
  std::bernoulli_distribution coin(dup);
  for (int l : order) {
    std::set<Sec> have;
    for (int p = 0; p < n; ++p)
      if (p != l && levels[l].subset_of(levels[p]))
        for (const auto& [v, t] : secs[p]) have.insert({cut(v, levels[l]), 0});
    const int fresh = std::uniform_int_distribution<int>(have.empty() ? 1 : 0, 2)(rng);
    for (int k = 0; k < fresh; ++k) {
      if (max_sections && static_cast<int>(have.size()) >= max_sections) break;
      std::vector<int> v(x.size(), -1);
      levels[l].for_each([&](int pt) { v[pt] = std::uniform_int_distribution<int>(0, stalk[pt] - 1)(rng); });
      have.insert({v, 0});
    }
    std::vector<Sec> list(have.begin(), have.end());
    if (coin(rng) && (!max_sections || static_cast<int>(list.size()) < max_sections)) {
      auto orig = list[std::uniform_int_distribution<std::size_t>(0, list.size() - 1)(rng)];
      list.push_back({orig.first, 1});
    }
    secs[l] = list;
  }
  std::vector<std::vector<std::string>> ids(n);
  for (int l = 0; l < n; ++l)
    for (const auto& [v, t] : secs[l]) {
      std::string id;
      levels[l].for_each([&](int pt) { id += std::to_string(v[pt]); });
      ids[l].push_back(id + (t ? "'" : ""));
    }
  return make_presheaf(x, levels, ids, [&](int p, int q, int s) {
    if (p == q) return s;
    const Sec target{cut(secs[p][s].first, levels[q]), 0};
    return static_cast<int>(std::find(secs[q].begin(), secs[q].end(), target) - secs[q].begin());
  });
}

}  // namespace stonean::sheaf
