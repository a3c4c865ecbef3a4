#pragma once

#include "bipath/distances.hpp"
#include "bipath/errors.hpp"
#include "bipath/fibered.hpp"
#include "bipath/field.hpp"
#include "bipath/io.hpp"
#include "bipath/module.hpp"
#include "bipath/rational.hpp"
#include "bipath/selftest.hpp"
#include "bipath/zigzag.hpp"
