#pragma once

#include "tcrobots/config.hpp"
#include "tcrobots/error.hpp"
#include "tcrobots/homology.hpp"
#include "tcrobots/planners.hpp"
#include "tcrobots/render.hpp"
#include "tcrobots/retraction.hpp"
#include "tcrobots/skeleton.hpp"
#include "tcrobots/spaces.hpp"
#include "tcrobots/trajectory.hpp"
#include "tcrobots/union_find.hpp"
#include "tcrobots/verify.hpp"
