#pragma once

#include "silt/chaos/chaos_vector.hpp"
#include "silt/chaos/gaussian_norm.hpp"
#include "silt/chaos/haar_basis.hpp"
#include "silt/chaos/polynomial.hpp"
#include "silt/chaos/projection.hpp"
#include "silt/chaos/s_transform.hpp"
#include "silt/chaos/tensor.hpp"
