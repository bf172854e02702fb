// Part of the bigstep workbench, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <ostream>
#include <string>
#include <utility>

namespace bsw {

/// A configuration of some big-step semantics.
///
/// The payload is calculus-specific and opaque to the generic machinery.
/// Identity, ordering and printing all go through the canonical text form,
/// which every calculus keeps injective on its configurations.
class Config {
 public:
  Config() = default;

  template <typename T>
  static Config make(std::shared_ptr<const T> node, std::string text) {
    Config c;
    c.node_ = std::static_pointer_cast<const void>(std::move(node));
    c.text_ = std::move(text);
    return c;
  }

  const std::string& text() const { return text_; }
  bool empty() const { return node_ == nullptr; }

  // The caller must know which calculus produced this configuration.
  template <typename T>
  const T& payload() const {
    return *static_cast<const T*>(node_.get());
  }

  template <typename T>
  std::shared_ptr<const T> payload_ptr() const {
    return std::static_pointer_cast<const T>(node_);
  }

  friend bool operator==(const Config& a, const Config& b) { return a.text_ == b.text_; }
  friend bool operator!=(const Config& a, const Config& b) { return a.text_ != b.text_; }
  friend bool operator<(const Config& a, const Config& b) { return a.text_ < b.text_; }

 private:
  std::shared_ptr<const void> node_;
  std::string text_;
};

inline std::ostream& operator<<(std::ostream& os, const Config& c) { return os << c.text(); }

/// A result value. Results embed into configurations (R subset of C); this
/// wrapper marks values that the owning semantics accepts as results.
struct Result {
  Config cfg;

  const std::string& text() const { return cfg.text(); }
  friend bool operator==(const Result& a, const Result& b) { return a.cfg == b.cfg; }
  friend bool operator!=(const Result& a, const Result& b) { return a.cfg != b.cfg; }
  friend bool operator<(const Result& a, const Result& b) { return a.cfg < b.cfg; }
};

inline std::ostream& operator<<(std::ostream& os, const Result& r) { return os << r.cfg; }

/// A judgment c => r.
struct Judgment {
  Config config;
  Result result;

  friend bool operator==(const Judgment& a, const Judgment& b) {
    return a.config == b.config && a.result == b.result;
  }
  friend bool operator!=(const Judgment& a, const Judgment& b) { return !(a == b); }
  friend bool operator<(const Judgment& a, const Judgment& b) {
    if (a.config != b.config) return a.config < b.config;
    return a.result < b.result;
  }
};

inline std::ostream& operator<<(std::ostream& os, const Judgment& j) {
  return os << j.config << " => " << j.result;
}

}  // namespace bsw
