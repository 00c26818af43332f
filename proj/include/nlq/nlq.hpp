#pragma once

#include "nlq/bloch.hpp"
#include "nlq/cnf.hpp"
#include "nlq/elliptic.hpp"
#include "nlq/encoder.hpp"
#include "nlq/errors.hpp"
#include "nlq/field.hpp"
#include "nlq/integrator.hpp"
#include "nlq/io.hpp"
#include "nlq/models.hpp"
#include "nlq/solvers.hpp"
