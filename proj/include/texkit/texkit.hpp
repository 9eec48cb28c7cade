#pragma once

// Umbrella header for the texkit texture analysis toolkit.

#include "texkit/classify.hpp"
#include "texkit/commands.hpp"
#include "texkit/curation.hpp"
#include "texkit/feature_io.hpp"
#include "texkit/features.hpp"
#include "texkit/gtdm.hpp"
#include "texkit/histogram.hpp"
#include "texkit/image.hpp"
#include "texkit/image_io.hpp"
#include "texkit/lbp.hpp"
#include "texkit/rng.hpp"
