#pragma once

#include "defect_nls/error.hpp"
#include "defect_nls/numerics.hpp"
#include "defect_nls/lax.hpp"
#include "defect_nls/darboux.hpp"
#include "defect_nls/defect.hpp"
#include "defect_nls/scattering.hpp"
#include "defect_nls/config.hpp"
#include "defect_nls/grid.hpp"
#include "defect_nls/report.hpp"
#include "defect_nls/verify.hpp"
