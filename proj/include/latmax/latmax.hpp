#pragma once

#include "latmax/lattice.hpp"
#include "latmax/report.hpp"
#include "latmax/basis.hpp"
#include "latmax/estimation.hpp"
#include "latmax/greedy.hpp"
#include "latmax/constructions/bundle.hpp"
#include "latmax/constructions/lindenstrauss.hpp"
#include "latmax/constructions/triangular.hpp"
#include "latmax/constructions/trace_dual.hpp"
#include "latmax/constructions/hadamard.hpp"
#include "latmax/constructions/rademacher.hpp"
#include "latmax/constructions/haar.hpp"
#include "latmax/constructions/typewriter.hpp"
#include "latmax/constructions/lorentz.hpp"
#include "latmax/constructions/orlicz.hpp"
