#pragma once

#include <qpcut/bench.hpp>
#include <qpcut/graph.hpp>
#include <qpcut/oracle.hpp>
#include <qpcut/qp.hpp>
#include <qpcut/rounding.hpp>
