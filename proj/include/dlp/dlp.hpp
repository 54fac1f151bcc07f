#pragma once

#include "dlp/errors.hpp"
#include "dlp/rational.hpp"
#include "dlp/poly.hpp"
#include "dlp/orthopoly.hpp"
#include "dlp/simplex.hpp"
#include "dlp/matrix.hpp"
#include "dlp/psdcomp.hpp"
#include "dlp/io.hpp"
#include "dlp/delsarte.hpp"
#include "dlp/codes.hpp"
#include "dlp/hamming.hpp"
#include "dlp/preservers.hpp"
