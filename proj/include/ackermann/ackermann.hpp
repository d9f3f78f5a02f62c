#pragma once

#include "ackermann/construction.hpp"
#include "ackermann/errors.hpp"
#include "ackermann/harness.hpp"
#include "ackermann/oracle.hpp"
#include "ackermann/serialize.hpp"
#include "ackermann/solver.hpp"
#include "ackermann/structure.hpp"
#include "ackermann/syntax.hpp"
#include "ackermann/types.hpp"
#include "ackermann/witness.hpp"
