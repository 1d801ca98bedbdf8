#pragma once

#include "orient/cli/report.hpp"
#include "orient/fgl.hpp"

namespace orient::cli {

/// Axiom and consistency suite for one theory at law order N >= 2. Ring
/// checks use the law at max(N, required order of the ring). With
/// `inject_fault` the formal inverse is perturbed by u^3 before the inverse
/// identity is checked (needs N >= 5).
Report check_axioms(FglKind kind, int order, bool inject_fault = false);

}  // namespace orient::cli
