#ifndef LSKR_LSKR_HPP
#define LSKR_LSKR_HPP

#include "lskr/conjugate_gradient.hpp"
#include "lskr/error.hpp"
#include "lskr/feature_space.hpp"
#include "lskr/geometry_types.hpp"
#include "lskr/io.hpp"
#include "lskr/irls_recovery.hpp"
#include "lskr/kernel_engine.hpp"
#include "lskr/metrics.hpp"
#include "lskr/operators.hpp"
#include "lskr/parallel.hpp"
#include "lskr/surface_fit.hpp"
#include "lskr/synthdata.hpp"

#endif  // LSKR_LSKR_HPP
