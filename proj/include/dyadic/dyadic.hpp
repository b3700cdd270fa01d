#pragma once

#include <dyadic/bit_word.hpp>
#include <dyadic/eigen.hpp>
#include <dyadic/l2.hpp>
#include <dyadic/measure.hpp>
#include <dyadic/rational.hpp>
#include <dyadic/suspension.hpp>
