#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "stonean/balg.hpp"
#include "stonean/bvm.hpp"
#include "stonean/fintop.hpp"
#include "stonean/sheaf.hpp"

namespace stonean::io {

using json = nlohmann::json;

class Workspace;

json to_json(const balg::BoolAlg& b);
balg::BoolAlg algebra_from_json(const json& j);
/// Elements are sorted arrays of atom labels; strings in the element syntax are also accepted.
json to_json(const balg::Elem& e);
balg::Elem elem_from_json(const balg::BoolAlg& b, const json& j);
json to_json(const balg::BAHom& h);
balg::BAHom hom_from_json(const json& j, const Workspace* ws = nullptr);

json to_json(const topo::FinTop& x);
topo::FinTop topology_from_json(const json& j);
json to_json(const topo::FinPoset& p);
topo::FinPoset poset_from_json(const json& j);

/// "algebra" may name a workspace algebra or be given inline.
json to_json(const bvm::BVModel& m);
bvm::BVModel model_from_json(const json& j, const Workspace* ws = nullptr);

/// "base" may name a workspace topology or poset, or be given inline. On a poset
/// base a level key names the down-set of an element or a '+'-joined union of them;
/// on a topology it is the '+'-joined list of points.
json to_json(const sheaf::Presheaf& f);
sheaf::Presheaf presheaf_from_json(const json& j, const Workspace* ws = nullptr);

class Workspace {
 public:
  enum class Kind { Algebra, Topology, Poset, Model, Presheaf };

  /// The built-in fixtures: B2, B4, B8, MNM, M_R, Sierpinski, PV, SierpinskiPresheaf.
  static Workspace builtin();

  /// Loads a registry file {"algebras": {...}, "topologies": {...}, "posets": {...},
  /// "models": {...}, "presheaves": {...}}; throws InputError on clashes.
  void load_file(const std::string& path);
  void load(const json& j);

  void add(const std::string& name, balg::BoolAlg b);
  void add(const std::string& name, topo::FinTop x);
  void add(const std::string& name, topo::FinPoset p);
  void add(const std::string& name, bvm::BVModel m);
  void add(const std::string& name, sheaf::Presheaf f);

  bool has(const std::string& name) const { return kinds_.count(name) > 0; }
  Kind kind(const std::string& name) const;
  const balg::BoolAlg& algebra(const std::string& name) const;
  const topo::FinTop& topology(const std::string& name) const;
  const topo::FinPoset& poset(const std::string& name) const;
  const bvm::BVModel& model(const std::string& name) const;
  const sheaf::Presheaf& presheaf(const std::string& name) const;
  std::vector<std::pair<std::string, Kind>> entries() const;

 private:
  void claim(const std::string& name, Kind k);

  std::map<std::string, Kind> kinds_;
  std::map<std::string, balg::BoolAlg> algebras_;
  std::map<std::string, topo::FinTop> topologies_;
  std::map<std::string, topo::FinPoset> posets_;
  std::map<std::string, bvm::BVModel> models_;
  std::map<std::string, sheaf::Presheaf> presheaves_;
};

const char* kind_name(Workspace::Kind k);

}  // namespace stonean::io
