#pragma once

#include <string>

#include "unicirc/errors.hpp"

namespace unicirc {

// Identifies one of the circular ensembles: Dyson index beta, number of
// eigenphases N (for beta = 4 this counts the distinct Kramers-degenerate
// phases of a 2N x 2N matrix), and whether the unimodular constraint
// det U = 1 is imposed.  Density evaluation is defined for every integer
// beta >= 1; matrix-model sampling only for beta in {1, 2, 4}.
struct EnsembleSpec {
  int beta = 2;
  int N = 2;
  bool unimodular = true;

  void validate() const {
    if (beta < 1) throw InvalidParams("EnsembleSpec: beta must be >= 1");
    if (N < 1) throw InvalidParams("EnsembleSpec: N must be >= 1");
  }

  bool samplable() const { return beta == 1 || beta == 2 || beta == 4; }
};

}  // namespace unicirc
