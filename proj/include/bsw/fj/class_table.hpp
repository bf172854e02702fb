// Part of the bigstep workbench, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bsw/fj/ast.hpp"

namespace bsw::fj {

struct TableError : std::runtime_error {
  explicit TableError(const std::string& what) : std::runtime_error(what) {}
};

enum class Flavor { FjLambda, FjUnion, FjImperative };

/// Immutable class/interface declarations with the derived lookups. Structural
/// well-formedness (known names, acyclic hierarchy, no field hiding, no
/// overloading, override consistency, interface coverage) is checked on
/// construction; method-body typing is the respective type checker's job.
class ClassTable {
 public:
  static ClassTable build(Program p, Flavor flavor);

  Flavor flavor() const { return flavor_; }
  const Program& program() const { return prog_; }

  bool has_class(const std::string& name) const;
  bool has_interface(const std::string& name) const;
  bool is_type(const std::string& name) const { return has_class(name) || has_interface(name); }
  const ClassDef& cls(const std::string& name) const;
  const InterfaceDef& iface(const std::string& name) const;
  std::vector<std::string> class_names() const;      // declaration order, without Object
  std::vector<std::string> interface_names() const;  // sorted
  std::vector<std::string> type_names() const;       // classes then interfaces

  // Field declarations of a class, base classes first.
  std::vector<std::pair<std::string, std::string>> fields(const std::string& cls) const;
  std::optional<int> field_index(const std::string& cls, const std::string& field) const;

  // Method type of a class or interface member; an intersection is a list of
  // signatures (singleton outside MiniFJ&O).
  std::optional<std::vector<MethodSig>> mtype(const std::string& type,
                                              const std::string& method) const;
  // Parameters and body, found along the superclass chain.
  const MethodDef* mbody(const std::string& cls, const std::string& method) const;

  // Nominal subtyping: reflexive-transitive closure of extends + implements.
  bool subtype(const std::string& a, const std::string& b) const;

  // The unique method signature of a functional interface.
  std::optional<MethodSig> umtype(const std::string& iface) const;
  bool is_functional_interface(const std::string& name) const {
    return has_interface(name) && umtype(name).has_value();
  }

 private:
  Flavor flavor_ = Flavor::FjLambda;
  Program prog_;
};

}  // namespace bsw::fj
