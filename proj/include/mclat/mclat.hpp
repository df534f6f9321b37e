#ifndef MCLAT_MCLAT_HPP
#define MCLAT_MCLAT_HPP

#include "point.hpp"
#include "finset.hpp"
#include "fci.hpp"
#include "syntax.hpp"
#include "semantics.hpp"
#include "transforms.hpp"
#include "oracle.hpp"
#include "corpus.hpp"
#include "checks.hpp"

#endif // MCLAT_MCLAT_HPP
