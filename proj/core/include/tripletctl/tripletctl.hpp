#pragma once

#include "tripletctl/box_lbfgs.hpp"
#include "tripletctl/errors.hpp"
#include "tripletctl/export.hpp"
#include "tripletctl/model.hpp"
#include "tripletctl/optimal_control.hpp"
#include "tripletctl/propagator.hpp"
#include "tripletctl/shortcut.hpp"
#include "tripletctl/spectral.hpp"
#include "tripletctl/sweeps.hpp"
#include "tripletctl/trig_series.hpp"
#include "tripletctl/waveform.hpp"
