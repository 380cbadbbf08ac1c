#pragma once

#include "regimes/cart.hpp"
#include "regimes/core.hpp"
#include "regimes/dct.hpp"
#include "regimes/diagnostics.hpp"
#include "regimes/kmeans.hpp"
#include "regimes/pcoa.hpp"
#include "regimes/priceanalysis.hpp"
#include "regimes/rng.hpp"
#include "regimes/smoothing.hpp"
#include "regimes/stats.hpp"
#include "regimes/svg.hpp"
#include "regimes/validation.hpp"
#include "regimes/volatility.hpp"
