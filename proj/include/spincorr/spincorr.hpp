#pragma once

#include "spincorr/bloch.hpp"
#include "spincorr/ensemble.hpp"
#include "spincorr/errors.hpp"
#include "spincorr/gellmann.hpp"
#include "spincorr/gme.hpp"
#include "spincorr/identities.hpp"
#include "spincorr/linalg.hpp"
#include "spincorr/realign.hpp"
#include "spincorr/reports.hpp"
#include "spincorr/state_file.hpp"
#include "spincorr/states.hpp"
