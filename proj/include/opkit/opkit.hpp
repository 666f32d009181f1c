// Umbrella header.
#pragma once

#include "opkit/bounds.hpp"
#include "opkit/core.hpp"
#include "opkit/fixtures.hpp"
#include "opkit/funcalc.hpp"
#include "opkit/intertwine.hpp"
#include "opkit/io.hpp"
#include "opkit/polar.hpp"
#include "opkit/quadrature.hpp"
#include "opkit/sectorial.hpp"
#include "opkit/verify.hpp"
