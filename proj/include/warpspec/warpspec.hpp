#pragma once

#include "warpspec/errors.hpp"
#include "warpspec/profile.hpp"
#include "warpspec/manifold.hpp"
#include "warpspec/quadrature.hpp"
#include "warpspec/volume.hpp"
#include "warpspec/tridiagonal.hpp"
#include "warpspec/ode.hpp"
#include "warpspec/spectrum.hpp"
#include "warpspec/bounds.hpp"
#include "warpspec/config.hpp"
#include "warpspec/report.hpp"
#include "warpspec/verify.hpp"
