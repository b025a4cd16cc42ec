#pragma once

#include "prefmono/audit.hpp"
#include "prefmono/config.hpp"
#include "prefmono/dataset.hpp"
#include "prefmono/domain.hpp"
#include "prefmono/errors.hpp"
#include "prefmono/loss.hpp"
#include "prefmono/report.hpp"
#include "prefmono/root_law.hpp"
#include "prefmono/score_model.hpp"
#include "prefmono/solver.hpp"
#include "prefmono/spectral.hpp"
