#pragma once

#include "rankforge/elimination.hpp"
#include "rankforge/error.hpp"
#include "rankforge/io.hpp"
#include "rankforge/matrix.hpp"
#include "rankforge/oracle.hpp"
#include "rankforge/orthogonalization.hpp"
#include "rankforge/permutation.hpp"
#include "rankforge/report.hpp"
#include "rankforge/scalar.hpp"
#include "rankforge/skeleton.hpp"
#include "rankforge/subspaces.hpp"
#include "rankforge/tolerance.hpp"
#include "rankforge/utv.hpp"
#include "rankforge/verify.hpp"
