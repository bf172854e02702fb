// Part of the bigstep workbench, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
#include "bsw/stack.hpp"

#include <pthread.h>

#include <stdexcept>

namespace bsw {

namespace {

void* trampoline(void* arg) {
  auto* fn = static_cast<const std::function<void()>*>(arg);
  (*fn)();
  return nullptr;
}

}  // namespace

void call_on_large_stack(const std::function<void()>& f) {
  pthread_attr_t attr;
  pthread_attr_init(&attr);
  pthread_attr_setstacksize(&attr, 512u * 1024 * 1024);
  pthread_t thread;
  if (pthread_create(&thread, &attr, trampoline, const_cast<std::function<void()>*>(&f)) != 0) {
    pthread_attr_destroy(&attr);
    throw std::runtime_error("cannot spawn a large-stack worker");
  }
  pthread_attr_destroy(&attr);
  pthread_join(thread, nullptr);
}

}  // namespace bsw
