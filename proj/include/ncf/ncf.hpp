#pragma once

#include "ncf/beamline.hpp"
#include "ncf/constants.hpp"
#include "ncf/dielectric.hpp"
#include "ncf/errors.hpp"
#include "ncf/friction.hpp"
#include "ncf/matdb.hpp"
#include "ncf/mirror.hpp"
#include "ncf/ode.hpp"
#include "ncf/report.hpp"
#include "ncf/specfun.hpp"
#include "ncf/thermal.hpp"
#include "ncf/trajectory.hpp"
