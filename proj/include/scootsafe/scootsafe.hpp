#pragma once

#include "scootsafe/error.hpp"
#include "scootsafe/geodesy.hpp"
#include "scootsafe/trajectory.hpp"
#include "scootsafe/kinematics.hpp"
#include "scootsafe/conflict.hpp"
#include "scootsafe/encounter_geometry.hpp"
#include "scootsafe/report.hpp"
#include "scootsafe/pipeline.hpp"
#include "scootsafe/scenario_gen.hpp"
#include "scootsafe/csv_io.hpp"
