#pragma once

#include "fpemd/classical_emd.hpp"
#include "fpemd/csv.hpp"
#include "fpemd/decomposition.hpp"
#include "fpemd/error.hpp"
#include "fpemd/experiments.hpp"
#include "fpemd/heat_solver.hpp"
#include "fpemd/hilbert_spectrum.hpp"
#include "fpemd/numeric.hpp"
#include "fpemd/pde_emd.hpp"
#include "fpemd/pde_params.hpp"
#include "fpemd/signal.hpp"

namespace fpemd {
inline constexpr const char* kVersion = "0.1.0";
}
