// Umbrella header.
#pragma once

#include "pwlc/analytic.hpp"
#include "pwlc/core.hpp"
#include "pwlc/cycles.hpp"
#include "pwlc/families.hpp"
#include "pwlc/hypotheses.hpp"
#include "pwlc/io.hpp"
#include "pwlc/oracle.hpp"
#include "pwlc/parallel.hpp"
#include "pwlc/portrait.hpp"
