#pragma once

#include <qto/box_export.hpp>
#include <qto/catalogs.hpp>
#include <qto/error.hpp>
#include <qto/estimator.hpp>
#include <qto/filter.hpp>
#include <qto/geometry.hpp>
#include <qto/obj_io.hpp>
#include <qto/reporting.hpp>
#include <qto/scene.hpp>
