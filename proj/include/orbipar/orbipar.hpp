#pragma once

#include <orbipar/error.hpp>
#include <orbipar/field.hpp>
#include <orbipar/series.hpp>
#include <orbipar/matrix.hpp>
#include <orbipar/linear.hpp>
#include <orbipar/random.hpp>
#include <orbipar/group.hpp>
#include <orbipar/local_galois.hpp>
#include <orbipar/semilinear.hpp>
#include <orbipar/cocycle.hpp>
#include <orbipar/product_module.hpp>
#include <orbipar/parabolic.hpp>
#include <orbipar/corpus.hpp>
#include <orbipar/pvect_ops.hpp>
#include <orbipar/scenario.hpp>
