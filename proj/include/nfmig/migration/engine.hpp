#pragma once

#include "nfmig/migration/analytic.hpp"
#include "nfmig/migration/inter_copy.hpp"
#include "nfmig/migration/parallel.hpp"
#include "nfmig/migration/post_copy.hpp"
#include "nfmig/migration/pre_copy.hpp"
#include "nfmig/migration/redeploy.hpp"
