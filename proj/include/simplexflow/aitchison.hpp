#pragma once

#include "simplexflow/composition.hpp"

namespace simplexflow {

// x (+) y = C(x_1 y_1, ..., x_K y_K). The uniform composition is the identity.
Composition perturb(const Composition& x, const Composition& y);
// x (-) y = x (+) y^-1.
Composition perturb_difference(const Composition& x, const Composition& y);

// Centred logratio log x - mean(log x).
Vector clr(const Composition& x);

// (1/2K) sum_{i,j} log(x_i/x_j) log(y_i/y_j), evaluated through the
// equivalent clr form <clr x, clr y>.
double aitchison_inner(const Composition& x, const Composition& y);
double aitchison_norm(const Composition& x);
double aitchison_distance(const Composition& x, const Composition& y);

}  // namespace simplexflow
