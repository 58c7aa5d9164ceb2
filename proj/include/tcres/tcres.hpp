#pragma once

#include "tcres/types.hpp"
#include "tcres/numerics.hpp"
#include "tcres/classical.hpp"
#include "tcres/prufer.hpp"
#include "tcres/angular.hpp"
#include "tcres/radial.hpp"
#include "tcres/green2d.hpp"
#include "tcres/resonances.hpp"
#include "tcres/io.hpp"
#include "tcres/run.hpp"
