// Part of the bigstep workbench, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
#include "bsw/fj/class_table.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace bsw::fj {

namespace {

[[noreturn]] void violate(const std::string& constraint, const std::string& detail) {
  throw TableError("class table violates '" + constraint + "': " + detail);
}

void forbid(const ExprPtr& e, Expr::Kind kind, const char* what, const char* flavor_name) {
  for (const ExprPtr& sub : subexprs(e))
    if (sub->kind == kind)
      violate("construct restriction", std::string(what) + " is not part of " + flavor_name);
}

}  // namespace

ClassTable ClassTable::build(Program p, Flavor flavor) {
  if (!p.classes.count("Object")) {
    ClassDef object;
    object.name = "Object";
    object.super = "";
    p.classes.emplace("Object", std::move(object));
  }

  ClassTable ct;
  ct.flavor_ = flavor;
  ct.prog_ = std::move(p);
  const Program& prog = ct.prog_;

  // known supertypes and acyclicity
  for (const auto& [name, cd] : prog.classes) {
    if (name == "Object") continue;
    if (!prog.classes.count(cd.super))
      violate("known superclass", name + " extends unknown " + cd.super);
    for (const std::string& i : cd.interfaces)
      if (!prog.interfaces.count(i)) violate("known interface", name + " implements " + i);
  }
  for (const auto& [name, idf] : prog.interfaces)
    for (const std::string& s : idf.supers)
      if (!prog.interfaces.count(s)) violate("known superinterface", name + " extends " + s);
  for (const auto& [name, cd] : prog.classes) {
    std::set<std::string> seen{name};
    std::string cur = cd.super;
    while (!cur.empty()) {
      if (!seen.insert(cur).second) violate("acyclic hierarchy", "class " + name);
      cur = prog.classes.at(cur).super;
    }
  }
  for (const auto& [name, idf] : prog.interfaces) {
    (void)idf;
    std::set<std::string> visited;
    std::vector<std::string> stack{name};
    while (!stack.empty()) {
      std::string cur = stack.back();
      stack.pop_back();
      for (const std::string& s : prog.interfaces.at(cur).supers) {
        if (s == name) violate("acyclic hierarchy", "interface " + name);
        if (visited.insert(s).second) stack.push_back(s);
      }
    }
  }

  for (const auto& [name, cd] : prog.classes) {
    if (name == "Object") continue;
    // field types known; no field hiding
    auto inherited = ct.fields(cd.super);
    for (const auto& [ftype, fname] : cd.fields) {
      if (!ct.is_type(ftype)) violate("known field type", name + "." + fname + " : " + ftype);
      for (const auto& [_, base_name] : inherited)
        if (base_name == fname) violate("no field hiding", name + "." + fname);
    }
    for (const auto& [mname, md] : cd.methods) {
      // bool is a method type of MiniFJ&O only
      auto known = [&](const std::string& t) {
        return ct.is_type(t) || (flavor == Flavor::FjUnion && t == "bool");
      };
      for (const MethodSig& sig : md.components) {
        if (!known(sig.ret))
          violate("known return type", name + "." + mname + " : " + sig.ret);
        for (const std::string& t : sig.param_types)
          if (!known(t)) violate("known parameter type", name + "." + mname);
        if (sig.param_types.size() != md.params.size())
          violate("signature arity", name + "." + mname);
      }
      if (flavor == Flavor::FjUnion) {
        for (const MethodSig& sig : md.components)
          if (sig.ret != md.components.front().ret)
            violate("intersection components share the return type", name + "." + mname);
      } else if (md.components.size() != 1) {
        violate("intersection method types are MiniFJ&O only", name + "." + mname);
      }
      // overriding keeps parameter and return types
      auto super_m = ct.mtype(cd.super, mname);
      if (super_m && !(*super_m == md.components))
        violate("override keeps the method type", name + "." + mname);
    }
    // every interface method is implemented with the declared signature
    for (const std::string& i : cd.interfaces) {
      std::vector<std::string> todo{i};
      std::set<std::string> seen;
      while (!todo.empty()) {
        std::string cur = todo.back();
        todo.pop_back();
        if (!seen.insert(cur).second) continue;
        const InterfaceDef& idf = prog.interfaces.at(cur);
        for (const auto& [mname, sig] : idf.sigs) {
          auto impl = ct.mtype(name, mname);
          if (!impl) violate("interface method implemented", name + " misses " + mname);
          if (impl->size() != 1 || !((*impl)[0] == sig))
            violate("interface method signature", name + "." + mname);
        }
        for (const std::string& s : idf.supers) todo.push_back(s);
      }
    }
  }

  // per-flavor construct restrictions on method bodies and main
  std::vector<ExprPtr> roots;
  for (const auto& [_, cd] : prog.classes)
    for (const auto& [__, md] : cd.methods) roots.push_back(md.body);
  if (prog.main) roots.push_back(prog.main);
  for (const ExprPtr& e : roots) {
    for (const ExprPtr& sub : subexprs(e)) {
      if (sub->kind == Expr::Kind::ObjectId || sub->kind == Expr::Kind::ObjectVal)
        violate("construct restriction", "runtime forms cannot occur in source");
    }
    switch (flavor) {
      case Flavor::FjLambda:
        forbid(e, Expr::Kind::If, "the conditional", "MiniFJ&lambda");
        forbid(e, Expr::Kind::BoolLit, "booleans", "MiniFJ&lambda");
        forbid(e, Expr::Kind::FieldAssign, "field assignment", "MiniFJ&lambda");
        break;
      case Flavor::FjUnion:
        forbid(e, Expr::Kind::Lambda, "lambda abstraction", "MiniFJ&O");
        forbid(e, Expr::Kind::Cast, "casts", "MiniFJ&O");
        forbid(e, Expr::Kind::FieldAssign, "field assignment", "MiniFJ&O");
        break;
      case Flavor::FjImperative:
        forbid(e, Expr::Kind::Lambda, "lambda abstraction", "imperative FJ");
        forbid(e, Expr::Kind::Cast, "casts", "imperative FJ");
        forbid(e, Expr::Kind::If, "the conditional", "imperative FJ");
        forbid(e, Expr::Kind::BoolLit, "booleans", "imperative FJ");
        break;
    }
  }
  if (flavor != Flavor::FjLambda && !prog.interfaces.empty())
    violate("construct restriction", "interfaces are MiniFJ&lambda only");

  return ct;
}

bool ClassTable::has_class(const std::string& name) const { return prog_.classes.count(name) > 0; }
bool ClassTable::has_interface(const std::string& name) const {
  return prog_.interfaces.count(name) > 0;
}
const ClassDef& ClassTable::cls(const std::string& name) const { return prog_.classes.at(name); }
const InterfaceDef& ClassTable::iface(const std::string& name) const {
  return prog_.interfaces.at(name);
}

std::vector<std::string> ClassTable::class_names() const { return prog_.class_order; }

std::vector<std::string> ClassTable::interface_names() const {
  std::vector<std::string> out;
  for (const auto& [n, _] : prog_.interfaces) out.push_back(n);
  return out;
}

std::vector<std::string> ClassTable::type_names() const {
  std::vector<std::string> out = class_names();
  for (const std::string& n : interface_names()) out.push_back(n);
  return out;
}

std::vector<std::pair<std::string, std::string>> ClassTable::fields(
    const std::string& cls_name) const {
  std::vector<std::string> chain;
  std::string cur = cls_name;
  while (!cur.empty()) {
    chain.push_back(cur);
    cur = prog_.classes.at(cur).super;
  }
  std::vector<std::pair<std::string, std::string>> out;
  for (auto it = chain.rbegin(); it != chain.rend(); ++it)
    for (const auto& f : prog_.classes.at(*it).fields) out.push_back(f);
  return out;
}

std::optional<int> ClassTable::field_index(const std::string& cls_name,
                                           const std::string& field) const {
  auto fs = fields(cls_name);
  for (size_t i = 0; i < fs.size(); ++i)
    if (fs[i].second == field) return static_cast<int>(i);
  return std::nullopt;
}

std::optional<std::vector<MethodSig>> ClassTable::mtype(const std::string& type,
                                                        const std::string& method) const {
  if (has_class(type)) {
    std::string cur = type;
    while (!cur.empty()) {
      const ClassDef& cd = prog_.classes.at(cur);
      auto it = cd.methods.find(method);
      if (it != cd.methods.end()) return it->second.components;
      cur = cd.super;
    }
    return std::nullopt;
  }
  if (has_interface(type)) {
    std::vector<std::string> todo{type};
    std::set<std::string> seen;
    while (!todo.empty()) {
      std::string cur = todo.back();
      todo.pop_back();
      if (!seen.insert(cur).second) continue;
      const InterfaceDef& idf = prog_.interfaces.at(cur);
      auto it = idf.sigs.find(method);
      if (it != idf.sigs.end()) return std::vector<MethodSig>{it->second};
      for (const std::string& s : idf.supers) todo.push_back(s);
    }
  }
  return std::nullopt;
}

const MethodDef* ClassTable::mbody(const std::string& cls_name, const std::string& method) const {
  std::string cur = cls_name;
  while (!cur.empty()) {
    const ClassDef& cd = prog_.classes.at(cur);
    auto it = cd.methods.find(method);
    if (it != cd.methods.end()) return &it->second;
    cur = cd.super;
  }
  return nullptr;
}

bool ClassTable::subtype(const std::string& a, const std::string& b) const {
  if (a == b) return true;
  std::vector<std::string> todo{a};
  std::set<std::string> seen;
  while (!todo.empty()) {
    std::string cur = todo.back();
    todo.pop_back();
    if (cur == b) return true;
    if (!seen.insert(cur).second) continue;
    if (has_class(cur)) {
      const ClassDef& cd = prog_.classes.at(cur);
      if (!cd.super.empty()) todo.push_back(cd.super);
      for (const std::string& i : cd.interfaces) todo.push_back(i);
    } else if (has_interface(cur)) {
      for (const std::string& s : prog_.interfaces.at(cur).supers) todo.push_back(s);
    }
  }
  return false;
}

std::optional<MethodSig> ClassTable::umtype(const std::string& iface_name) const {
  if (!has_interface(iface_name)) return std::nullopt;
  std::map<std::string, MethodSig> all;
  std::vector<std::string> todo{iface_name};
  std::set<std::string> seen;
  while (!todo.empty()) {
    std::string cur = todo.back();
    todo.pop_back();
    if (!seen.insert(cur).second) continue;
    const InterfaceDef& idf = prog_.interfaces.at(cur);
    for (const auto& [m, sig] : idf.sigs) all.emplace(m, sig);
    for (const std::string& s : idf.supers) todo.push_back(s);
  }
  if (all.size() != 1) return std::nullopt;
  return all.begin()->second;
}

}  // namespace bsw::fj
