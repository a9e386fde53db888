#pragma once

#include "doctest.h"

// doctest::Approx adds an absolute floor of 1.0 to its tolerance, which makes
// it meaningless for SI quantities such as watts or s^2/km. This one is
// purely relative.
inline doctest::Approx approx(double v) { return doctest::Approx(v).scale(0.0); }
