#pragma once

// Sparse Fourier sum-of-squares certificates on finite abelian groups:
// umbrella header.

#include "fsos/applications.hpp"
#include "fsos/bounds.hpp"
#include "fsos/certificate.hpp"
#include "fsos/errors.hpp"
#include "fsos/fourier.hpp"
#include "fsos/gram.hpp"
#include "fsos/graph.hpp"
#include "fsos/group.hpp"
#include "fsos/ilp.hpp"
#include "fsos/io.hpp"
#include "fsos/psd.hpp"
