#include "stonean/io.hpp"

#include <fstream>
#include <set>

#include "stonean/error.hpp"
#include "stonean/fixtures.hpp"

namespace stonean::io {

namespace {

const json& field(const json& j, const char* key, const char* what) {
  if (!j.is_object()) throw InputError(std::string(what) + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw InputError(std::string(what) + ": missing \"" + key + "\"");
  return *it;
}

std::vector<std::string> string_list(const json& j, const char* what) {
  if (!j.is_array()) throw InputError(std::string(what) + ": expected an array of strings");
  std::vector<std::string> out;
  for (const auto& v : j) {
    if (!v.is_string()) throw InputError(std::string(what) + ": expected an array of strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

int lookup(const std::vector<std::string>& names, const std::string& id, const std::string& what) {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == id) return static_cast<int>(i);
  throw InputError("unknown " + what + " \"" + id + "\"");
}

}  // namespace

json to_json(const balg::BoolAlg& b) { return json{{"atoms", b.labels()}}; }

balg::BoolAlg algebra_from_json(const json& j) { return balg::mk_powerset(string_list(field(j, "atoms", "algebra"), "algebra atoms")); }

json to_json(const balg::Elem& e) { return e.atom_labels(); }

balg::Elem elem_from_json(const balg::BoolAlg& b, const json& j) {
  if (j.is_string()) return b.parse(j.get<std::string>());
  return b.from_labels(string_list(j, "element"));
}

json to_json(const balg::BAHom& h) {
  json map = json::object();
  for (int c = 0; c < h.target().atom_count(); ++c) map[h.target().label(c)] = h.source().label(h.atom_map()[c]);
  return json{{"source", to_json(h.source())}, {"target", to_json(h.target())}, {"atom_map", map}};
}

balg::BAHom hom_from_json(const json& j, const Workspace* ws) {
  auto alg = [&](const json& a) {
    if (a.is_string()) {
      if (!ws) throw InputError("algebra reference \"" + a.get<std::string>() + "\" needs a workspace");
      return ws->algebra(a.get<std::string>());
    }
    return algebra_from_json(a);
  };
  const balg::BoolAlg s = alg(field(j, "source", "homomorphism")), t = alg(field(j, "target", "homomorphism"));
  const json& m = field(j, "atom_map", "homomorphism");
  if (!m.is_object()) throw InputError("homomorphism: atom_map must be an object");
  std::vector<int> map(t.atom_count(), -1);
  for (const auto& [c, b] : m.items()) {
    if (!b.is_string()) throw InputError("homomorphism: atom_map values must be atom labels");
    map[lookup(t.labels(), c, "target atom")] = lookup(s.labels(), b.get<std::string>(), "source atom");
  }
  for (int c = 0; c < t.atom_count(); ++c)
    if (map[c] < 0) throw InputError("homomorphism: atom " + t.label(c) + " is not mapped");
  return balg::BAHom(s, t, map);
}

json to_json(const topo::FinTop& x) {
  json opens = json::array();
  for (Subset u : x.opens()) {
    json o = json::array();
    u.for_each([&](int p) { o.push_back(x.point(p)); });
    opens.push_back(o);
  }
  return json{{"points", x.points()}, {"opens", opens}};
}

topo::FinTop topology_from_json(const json& j) {
  const auto pts = string_list(field(j, "points", "topology"), "topology points");
  const json& os = field(j, "opens", "topology");
  if (!os.is_array()) throw InputError("topology: opens must be an array of point lists");
  std::vector<Subset> opens;
  for (const auto& o : os) {
    Subset u;
    for (const auto& p : string_list(o, "open set")) u = u.with(lookup(pts, p, "point"));
    opens.push_back(u);
  }
  return topo::FinTop::from_opens(pts, opens);
}

json to_json(const topo::FinPoset& p) {
  json leq = json::array();
  for (int a = 0; a < p.size(); ++a)
    for (int b = 0; b < p.size(); ++b)
      if (a != b && p.leq(a, b)) leq.push_back({p.element(a), p.element(b)});
  return json{{"elements", p.elements()}, {"leq", leq}};
}

topo::FinPoset poset_from_json(const json& j) {
  const auto els = string_list(field(j, "elements", "poset"), "poset elements");
  const json& l = field(j, "leq", "poset");
  if (!l.is_array()) throw InputError("poset: leq must be an array of pairs");
  std::vector<std::pair<int, int>> pairs;
  for (const auto& pr : l) {
    const auto ab = string_list(pr, "leq pair");
    if (ab.size() != 2) throw InputError("poset: leq entries are pairs [a, b]");
    pairs.emplace_back(lookup(els, ab[0], "poset element"), lookup(els, ab[1], "poset element"));
  }
  return topo::FinPoset(els, pairs);
}

json to_json(const bvm::BVModel& m) {
  const int n = m.size();
  json eq = json::object();
  const Subset one = Subset::full(m.algebra.atom_count());
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t) {
      const Subset v = m.eq_bits(s, t);
      if ((s == t && v != one) || (s < t && !v.empty()) || (s > t && v != m.eq_bits(t, s)))
        eq[m.domain[s] + "," + m.domain[t]] = to_json(m.algebra.elem(v));
    }
  json rels = json::object(), arity = json::object();
  for (const auto& [r, k] : m.sig.relations) {
    arity[r] = k;
    json t = json::object();
    const auto& table = m.rel.at(r);
    for (std::size_t c = 0; c < table.size(); ++c) {
      if (table[c].empty()) continue;
      std::string key;
      for (int x : bvm::tuple_at(c, k, n)) key += (key.empty() ? "" : ",") + m.domain[x];
      t[key] = to_json(m.algebra.elem(table[c]));
    }
    rels[r] = t;
  }
  json consts = json::object();
  for (const auto& [c, x] : m.constants) consts[c] = m.domain[x];
  return json{{"algebra", to_json(m.algebra)}, {"domain", m.domain}, {"eq", eq},
              {"relations", rels},         {"arity", arity},      {"constants", consts}};
}

bvm::BVModel model_from_json(const json& j, const Workspace* ws) {
  const json& a = field(j, "algebra", "model");
  balg::BoolAlg alg;
  if (a.is_string()) {
    if (!ws) throw InputError("algebra reference \"" + a.get<std::string>() + "\" needs a workspace");
    alg = ws->algebra(a.get<std::string>());
  } else {
    alg = algebra_from_json(a);
  }
  const auto domain = string_list(field(j, "domain", "model"), "model domain");
  if (std::set<std::string>(domain.begin(), domain.end()).size() != domain.size())
    throw InputError("model: duplicate domain element");
  const int n = static_cast<int>(domain.size());

  logic::Signature sig;
  const json rels = j.value("relations", json::object());
  const json arity = j.value("arity", json::object());
  if (!rels.is_object() || !arity.is_object()) throw InputError("model: relations and arity must be objects");
  for (const auto& [r, k] : arity.items()) {
    if (!k.is_number_integer()) throw InputError("model: arity of " + r + " must be an integer");
    sig.relations[r] = k.get<int>();
  }
  for (const auto& [r, t] : rels.items()) {
    if (!t.is_object()) throw InputError("model: table of " + r + " must be an object");
    for (const auto& [key, v] : t.items()) {
      const int k = static_cast<int>(split(key, ',').size());
      auto [it, fresh] = sig.relations.emplace(r, k);
      if (!fresh && it->second != k) throw InputError("model: entry " + r + "(" + key + ") has the wrong arity");
    }
    if (!sig.relations.count(r)) throw InputError("model: relation " + r + " has no entries and no declared arity");
  }
  const json consts = j.value("constants", json::object());
  if (!consts.is_object()) throw InputError("model: constants must be an object");
  for (const auto& [c, v] : consts.items()) sig.constants.insert(c);
  sig.validate();

  bvm::BVModel m = bvm::BVModel::blank(alg, sig, domain);
  auto tuple = [&](const std::string& key) {
    std::vector<int> t;
    for (const auto& id : split(key, ',')) t.push_back(lookup(domain, id, "domain element"));
    return t;
  };
  const json eq = j.value("eq", json::object());
  if (!eq.is_object()) throw InputError("model: eq must be an object");
  std::set<std::pair<int, int>> given;
  for (const auto& [key, v] : eq.items()) {
    const auto t = tuple(key);
    if (t.size() != 2) throw InputError("model: eq key \"" + key + "\" must name two elements");
    m.eq[t[0] * n + t[1]] = elem_from_json(alg, v).bits();
    given.emplace(t[0], t[1]);
  }
  for (const auto& [s, t] : given)
    if (!given.count({t, s})) m.eq[t * n + s] = m.eq[s * n + t];
  for (const auto& [r, t] : rels.items())
    for (const auto& [key, v] : t.items()) m.rel[r][bvm::tuple_index(tuple(key), n)] = elem_from_json(alg, v).bits();
  for (const auto& [c, v] : consts.items()) {
    if (!v.is_string()) throw InputError("model: constant " + c + " must name a domain element");
    m.constants[c] = lookup(domain, v.get<std::string>(), "domain element");
  }
  return m;
}

json to_json(const sheaf::Presheaf& f) {
  json secs = json::object(), res = json::object();
  for (int p = 0; p < f.level_count(); ++p) secs[f.level_key(p)] = f.sections[p];
  for (int p = 0; p < f.level_count(); ++p)
    for (int q = 0; q < f.level_count(); ++q) {
      if (p == q || !f.below(q, p)) continue;
      json m = json::object();
      for (std::size_t s = 0; s < f.sections[p].size(); ++s) m[f.sections[p][s]] = f.sections[q][f.restrict(p, q, static_cast<int>(s))];
      res[f.level_key(q) + "<=" + f.level_key(p)] = m;
    }
  return json{{"base", to_json(f.space)}, {"sections", secs}, {"restrictions", res}};
}

sheaf::Presheaf presheaf_from_json(const json& j, const Workspace* ws) {
  const json& b = field(j, "base", "presheaf");
  topo::FinTop space = topo::FinTop::discrete({"_"});
  std::optional<topo::FinPoset> poset;
  if (b.is_string()) {
    const std::string name = b.get<std::string>();
    if (!ws) throw InputError("base reference \"" + name + "\" needs a workspace");
    if (ws->kind(name) == Workspace::Kind::Poset) poset = ws->poset(name);
    else space = ws->topology(name);
  } else if (b.is_object() && b.contains("elements")) {
    poset = poset_from_json(b);
  } else {
    space = topology_from_json(b);
  }
  if (poset) space = topo::down_topology(*poset);

  auto level_of = [&](const std::string& key) {
    Subset u;
    for (const auto& part : split(key, '+')) {
      const int x = lookup(space.points(), part, "point");
      u |= poset ? poset->down(x) : Subset::singleton(x);
    }
    return u;
  };
  const json& sj = field(j, "sections", "presheaf");
  if (!sj.is_object()) throw InputError("presheaf: sections must be an object");
  std::vector<Subset> levels;
  std::vector<std::vector<std::string>> secs;
  std::vector<std::string> keys;
  for (const auto& [key, v] : sj.items()) {
    levels.push_back(level_of(key));
    secs.push_back(string_list(v, "section list"));
    keys.push_back(key);
  }
  auto index_of = [&](const std::string& key) {
    const Subset u = level_of(key);
    for (std::size_t i = 0; i < levels.size(); ++i)
      if (levels[i] == u) return static_cast<int>(i);
    throw InputError("presheaf: \"" + key + "\" is not a level with sections");
  };
  const json rj = j.value("restrictions", json::object());
  if (!rj.is_object()) throw InputError("presheaf: restrictions must be an object");
  std::map<std::pair<int, int>, std::vector<int>> maps;
  for (const auto& [key, m] : rj.items()) {
    const auto pos = key.find("<=");
    if (pos == std::string::npos) throw InputError("presheaf: restriction key \"" + key + "\" must read q<=p");
    const int q = index_of(key.substr(0, pos)), p = index_of(key.substr(pos + 2));
    if (!levels[q].subset_of(levels[p])) throw InputError("presheaf: restriction " + key + " goes upward");
    if (!m.is_object()) throw InputError("presheaf: restriction " + key + " must be an object");
    std::vector<int> tbl(secs[p].size(), -1);
    for (const auto& [from, to] : m.items()) {
      if (!to.is_string()) throw InputError("presheaf: restriction " + key + " values must be section ids");
      tbl[lookup(secs[p], from, "section at " + keys[p])] = lookup(secs[q], to.get<std::string>(), "section at " + keys[q]);
    }
    maps[{p, q}] = tbl;
  }
  sheaf::Presheaf f = sheaf::make_presheaf(space, levels, secs, [&](int p, int q, int s) {
    if (p == q) return s;
    auto it = maps.find({p, q});
    if (it == maps.end())
      throw InputError("presheaf: restriction " + keys[q] + "<=" + keys[p] + " is missing");
    return it->second[s];
  });
  f.check_functorial();
  return f;
}

// ---------------------------------------------------------------- workspace

const char* kind_name(Workspace::Kind k) {
  switch (k) {
    case Workspace::Kind::Algebra: return "algebra";
    case Workspace::Kind::Topology: return "topology";
    case Workspace::Kind::Poset: return "poset";
    case Workspace::Kind::Model: return "model";
    case Workspace::Kind::Presheaf: return "presheaf";
  }
  return "?";
}

void Workspace::claim(const std::string& name, Kind k) {
  if (!kinds_.emplace(name, k).second) throw InputError("workspace name \"" + name + "\" is already taken");
}

void Workspace::add(const std::string& name, balg::BoolAlg b) { claim(name, Kind::Algebra); algebras_.emplace(name, std::move(b)); }
void Workspace::add(const std::string& name, topo::FinTop x) { claim(name, Kind::Topology); topologies_.emplace(name, std::move(x)); }
void Workspace::add(const std::string& name, topo::FinPoset p) { claim(name, Kind::Poset); posets_.emplace(name, std::move(p)); }
void Workspace::add(const std::string& name, bvm::BVModel m) { claim(name, Kind::Model); models_.emplace(name, std::move(m)); }
void Workspace::add(const std::string& name, sheaf::Presheaf f) { claim(name, Kind::Presheaf); presheaves_.emplace(name, std::move(f)); }

Workspace::Kind Workspace::kind(const std::string& name) const {
  auto it = kinds_.find(name);
  if (it == kinds_.end()) throw InputError("unknown name \"" + name + "\"");
  return it->second;
}

namespace {

template <class M>
const typename M::mapped_type& get(const M& m, const std::string& name, const char* what) {
  auto it = m.find(name);
  if (it == m.end()) throw InputError("\"" + name + "\" is not a known " + what);
  return it->second;
}

}  // namespace

const balg::BoolAlg& Workspace::algebra(const std::string& n) const { return get(algebras_, n, "algebra"); }
const topo::FinTop& Workspace::topology(const std::string& n) const { return get(topologies_, n, "topology"); }
const topo::FinPoset& Workspace::poset(const std::string& n) const { return get(posets_, n, "poset"); }
const bvm::BVModel& Workspace::model(const std::string& n) const { return get(models_, n, "model"); }
const sheaf::Presheaf& Workspace::presheaf(const std::string& n) const { return get(presheaves_, n, "presheaf"); }

std::vector<std::pair<std::string, Workspace::Kind>> Workspace::entries() const {
  return {kinds_.begin(), kinds_.end()};
}

void Workspace::load(const json& j) {
  if (!j.is_object()) throw InputError("workspace file must hold an object");
  static const std::set<std::string> known{"algebras", "topologies", "posets", "models", "presheaves"};
  for (const auto& [k, v] : j.items()) {
    if (!known.count(k)) throw InputError("workspace: unknown section \"" + k + "\"");
    if (!v.is_object()) throw InputError("workspace: section \"" + k + "\" must be an object");
  }
  auto each = [&](const char* section, auto fn) {
    if (!j.contains(section)) return;
    for (const auto& [name, v] : j.at(section).items()) {
      try {
        fn(name, v);
      } catch (const InputError& e) {
        throw InputError(std::string(section) + "." + name + ": " + e.what());
      } catch (const PreconditionError& e) {
        throw InputError(std::string(section) + "." + name + ": " + e.what());
      }
    }
  };
  each("algebras", [&](const std::string& n, const json& v) { add(n, algebra_from_json(v)); });
  each("topologies", [&](const std::string& n, const json& v) { add(n, topology_from_json(v)); });
  each("posets", [&](const std::string& n, const json& v) { add(n, poset_from_json(v)); });
  each("models", [&](const std::string& n, const json& v) { add(n, model_from_json(v, this)); });
  each("presheaves", [&](const std::string& n, const json& v) { add(n, presheaf_from_json(v, this)); });
}

void Workspace::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(path + ": malformed JSON: " + e.what());
  }
  load(j);
}

Workspace Workspace::builtin() {
  Workspace ws;
  ws.add("B2", fixtures::b2());
  ws.add("B4", fixtures::b4());
  ws.add("B8", fixtures::b8());
  ws.add("Sierpinski", fixtures::sierpinski());
  ws.add("PV", fixtures::pv());
  ws.add("MNM", fixtures::mnm());
  ws.add("M_R", fixtures::m_r());
  ws.add("SierpinskiPresheaf", fixtures::sierpinski_presheaf());
  return ws;
}

}  // namespace stonean::io
