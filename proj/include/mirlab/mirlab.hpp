#pragma once

#include "mirlab/cases.hpp"
#include "mirlab/chordnet.hpp"
#include "mirlab/distributions.hpp"
#include "mirlab/dynamics.hpp"
#include "mirlab/error.hpp"
#include "mirlab/graph.hpp"
#include "mirlab/information.hpp"
#include "mirlab/intervals.hpp"
#include "mirlab/io.hpp"
#include "mirlab/rankshape.hpp"
#include "mirlab/report.hpp"
#include "mirlab/resample.hpp"
#include "mirlab/rng.hpp"
#include "mirlab/rubato.hpp"
#include "mirlab/spectrum.hpp"
