#pragma once

#include "coherent/constructor.hpp"
#include "coherent/errors.hpp"
#include "coherent/extremality.hpp"
#include "coherent/linalg.hpp"
#include "coherent/measure.hpp"
#include "coherent/optimizer.hpp"
#include "coherent/rational.hpp"
#include "coherent/representation.hpp"
#include "coherent/sequence.hpp"
#include "coherent/support_graph.hpp"
