//
// Project adrgen - Copyright 2026 adrgen contributors.
// SPDX-License-Identifier: Apache-2.0
//
// Umbrella header for the whole library.

#pragma once

#include "adrgen/config.hpp"
#include "adrgen/errors.hpp"

#include "adrgen/chem/canonical.hpp"
#include "adrgen/chem/elements.hpp"
#include "adrgen/chem/molecule.hpp"
#include "adrgen/chem/perceive.hpp"
#include "adrgen/chem/smiles.hpp"

#include "adrgen/frag/brics.hpp"
#include "adrgen/frag/fragment.hpp"

#include "adrgen/graph/assoc.hpp"
#include "adrgen/graph/features.hpp"
#include "adrgen/graph/io.hpp"
#include "adrgen/graph/vocab.hpp"

#include "adrgen/nn/checkpoint.hpp"
#include "adrgen/nn/gradcheck.hpp"
#include "adrgen/nn/optim.hpp"
#include "adrgen/nn/rng.hpp"
#include "adrgen/nn/tensor.hpp"

#include "adrgen/model/decoder.hpp"
#include "adrgen/model/gat.hpp"
#include "adrgen/model/network.hpp"

#include "adrgen/pipeline/codec.hpp"
#include "adrgen/pipeline/contrib.hpp"
#include "adrgen/pipeline/dataset.hpp"
#include "adrgen/pipeline/io.hpp"
#include "adrgen/pipeline/metrics.hpp"
#include "adrgen/pipeline/selftest.hpp"
#include "adrgen/pipeline/train.hpp"
