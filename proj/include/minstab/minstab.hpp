#pragma once

#include "minstab/errors.hpp"
#include "minstab/fft.hpp"
#include "minstab/polynomial.hpp"
#include "minstab/harmonic_field.hpp"
#include "minstab/quadrature.hpp"
#include "minstab/eigen_sym.hpp"
#include "minstab/weierstrass.hpp"
#include "minstab/spectral.hpp"
#include "minstab/plane_grid.hpp"
#include "minstab/singular_oracles.hpp"
#include "minstab/transforms.hpp"
#include "minstab/variations.hpp"
#include "minstab/schwarz.hpp"
