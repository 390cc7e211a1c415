#pragma once

#include "commutant_lab/certificate.hpp"
#include "commutant_lab/dynamics.hpp"
#include "commutant_lab/eigen.hpp"
#include "commutant_lab/elementary_map.hpp"
#include "commutant_lab/error.hpp"
#include "commutant_lab/io.hpp"
#include "commutant_lab/linalg.hpp"
#include "commutant_lab/operator_spec.hpp"
#include "commutant_lab/parallel.hpp"
#include "commutant_lab/random.hpp"
#include "commutant_lab/series.hpp"
#include "commutant_lab/spectral.hpp"
#include "commutant_lab/spectral_set.hpp"
#include "commutant_lab/verify.hpp"
