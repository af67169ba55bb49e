#pragma once

#include "lvem/core.hpp"
#include "lvem/dispersion.hpp"
#include "lvem/expm.hpp"
#include "lvem/fock_space.hpp"
#include "lvem/hamiltonian.hpp"
#include "lvem/interaction.hpp"
#include "lvem/kappa_tensor.hpp"
#include "lvem/lorenz.hpp"
#include "lvem/sampling.hpp"
