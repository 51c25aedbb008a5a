#pragma once

#include "christoffel/affine.hpp"
#include "christoffel/body.hpp"
#include "christoffel/curve.hpp"
#include "christoffel/hull2d.hpp"
#include "christoffel/john.hpp"
#include "christoffel/measure.hpp"
