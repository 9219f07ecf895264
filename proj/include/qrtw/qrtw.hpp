#pragma once

#include "qrtw/coin.hpp"
#include "qrtw/error.hpp"
#include "qrtw/evolution.hpp"
#include "qrtw/lattice.hpp"
#include "qrtw/profile.hpp"
#include "qrtw/qgraph.hpp"
#include "qrtw/scattering.hpp"
#include "qrtw/series.hpp"
