#pragma once

#include "pultr/adjoint/compose.hpp"
#include "pultr/adjoint/omega.hpp"
#include "pultr/core/error.hpp"
#include "pultr/core/homomorphism.hpp"
#include "pultr/core/stock.hpp"
#include "pultr/core/structure.hpp"
#include "pultr/duals/dual.hpp"
#include "pultr/functors/gamma.hpp"
#include "pultr/functors/lambda.hpp"
#include "pultr/functors/template.hpp"
#include "pultr/io/structure_io.hpp"
#include "pultr/io/template_io.hpp"
#include "pultr/io/term_io.hpp"
#include "pultr/oracle/checks.hpp"
#include "pultr/oracle/enumerate.hpp"
#include "pultr/oracle/fixtures.hpp"
#include "pultr/terms/term.hpp"
#include "pultr/terms/tree.hpp"
