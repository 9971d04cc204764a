#pragma once

#include "bi/checker.hpp"
#include "bi/corpus.hpp"
#include "bi/reduction.hpp"
#include "bi/syntax.hpp"
