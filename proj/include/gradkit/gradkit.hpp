#pragma once

#include "gradkit/camera.hpp"
#include "gradkit/errors.hpp"
#include "gradkit/grid.hpp"
#include "gradkit/iterative_poisson.hpp"
#include "gradkit/metrics.hpp"
#include "gradkit/operators.hpp"
#include "gradkit/path_integration.hpp"
#include "gradkit/spectral_poisson.hpp"
#include "gradkit/synth.hpp"
#include "gradkit/transforms.hpp"
