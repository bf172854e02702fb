// Part of the bigstep workbench, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>

namespace bsw {

/// Runs f to completion on a thread with a large stack. The fuel-deep
/// classifier recursions exceed the default thread stack.
void call_on_large_stack(const std::function<void()>& f);

}  // namespace bsw
