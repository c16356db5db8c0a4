#pragma once

#include "harnack/errors.hpp"
#include "harnack/fd_oracle.hpp"
#include "harnack/format.hpp"
#include "harnack/geodesic_lab.hpp"
#include "harnack/green_profile.hpp"
#include "harnack/harnack_verifier.hpp"
#include "harnack/hypotheses.hpp"
#include "harnack/model_manifolds.hpp"
#include "harnack/reports.hpp"
#include "harnack/tensor/catalogue.hpp"
#include "harnack/tensor/rewrite.hpp"
