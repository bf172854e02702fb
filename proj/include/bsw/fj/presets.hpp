// Part of the bigstep workbench, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace bsw::fj::presets {

// The functional-interface program (interfaces J and I, class C with methods
// m and n) extended with the J-typed field used by the cast examples.
inline const char* fjl_table() {
  return R"(
class A { }
interface J { }
interface I extends J { A m(A x); }
class C {
  J f;
  C m(I y) { return new C(<I> (x) -> x).n(y); }
  C n(J y) { return new C(<I> (x) -> x); }
}
)";
}

// Two coordinate representations and an observer with an intersection-typed
// equality method.
inline const char* fjo_table() {
  return R"(
class P { }
class Q { }
class C { P point; }
class D { Q point; }
class E {
  bool eq(C x, C y) & bool eq(D x, D y) { return true; }
}
)";
}

// A mutable cell hierarchy.
inline const char* fji_table() {
  return R"(
class A { }
class A2 extends A { }
class B {
  A f;
  A get(A x) { return this.f = x; }
  A peek() { return this.f; }
}
)";
}

}  // namespace bsw::fj::presets
