#pragma once

#include "qsdc/adversary.hpp"
#include "qsdc/bases.hpp"
#include "qsdc/density.hpp"
#include "qsdc/errors.hpp"
#include "qsdc/protocol.hpp"
#include "qsdc/rng.hpp"
#include "qsdc/scheme.hpp"
#include "qsdc/security.hpp"
#include "qsdc/state.hpp"
#include "qsdc/swap_algebra.hpp"
#include "qsdc/transcript.hpp"
