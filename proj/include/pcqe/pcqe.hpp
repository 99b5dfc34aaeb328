#pragma once

// Quantifier elimination over the complex numbers in the language of ordered
// rings extended with the imaginary unit, real and imaginary parts, and
// conjugation. Elimination reduces to the ordered-ring fragment and results
// are re-compacted into complex notation.

#include "errors.hpp"
#include "rational.hpp"
#include "polynomial.hpp"
#include "term.hpp"
#include "normal_forms.hpp"
#include "formula.hpp"
#include "parser.hpp"
#include "printer.hpp"
#include "semantics.hpp"
#include "real_nf.hpp"
#include "realpoly.hpp"
#include "simplify.hpp"
#include "vs.hpp"
#include "backend.hpp"
#include "reinterpret.hpp"
#include "pipeline.hpp"
#include "sampler.hpp"
