#pragma once

// Convenience header pulling in the whole library.

#include "kreal/core/jet.hpp"
#include "kreal/core/jet_matrix.hpp"
#include "kreal/core/geometry_core.hpp"
#include "kreal/core/riemannian.hpp"
#include "kreal/kahler/metrics.hpp"
#include "kreal/antiholo/antiholomorphic.hpp"
#include "kreal/submanifold/real_submanifold.hpp"
#include "kreal/criterion/einstein_criterion.hpp"
#include "kreal/criterion/verdict.hpp"
#include "kreal/model/expression.hpp"
#include "kreal/model/bundle.hpp"
#include "kreal/model/sampling.hpp"
#include "kreal/model/spec.hpp"
#include "kreal/model/builtins.hpp"
#include "kreal/model/report.hpp"
