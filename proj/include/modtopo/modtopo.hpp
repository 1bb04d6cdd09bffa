#pragma once

#include "modtopo/error.hpp"
#include "modtopo/integer.hpp"
#include "modtopo/abgroup.hpp"
#include "modtopo/graded.hpp"
#include "modtopo/hilbert.hpp"
#include "modtopo/ktheory.hpp"
#include "modtopo/anomaly.hpp"
#include "modtopo/steenrod.hpp"
