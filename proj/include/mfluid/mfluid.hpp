#pragma once

#include "core.hpp"
#include "recon.hpp"
#include "globalflux.hpp"
#include "ldflux.hpp"
#include "aweno.hpp"
#include "sweep.hpp"
#include "integrator.hpp"
#include "problems.hpp"
#include "config.hpp"
#include "snapshot.hpp"
#include "driver.hpp"
