/**
 * @file lcaid.hpp
 * @brief Everything: groups, endomorphisms, distributions, functional
 *        equations, identifiability verifiers, solenoid windows, campaigns.
 */
#pragma once

#include "lcaid/errors.hpp"
#include "lcaid/rational.hpp"
#include "lcaid/group.hpp"
#include "lcaid/table.hpp"
#include "lcaid/endo.hpp"
#include "lcaid/distribution.hpp"
#include "lcaid/lattice.hpp"
#include "lcaid/funceq.hpp"
#include "lcaid/solenoid.hpp"
#include "lcaid/identify.hpp"
#include "lcaid/fixture.hpp"
#include "lcaid/invariants.hpp"
#include "lcaid/report.hpp"
#include "lcaid/campaign.hpp"
