#pragma once

#include "msdrec/core.hpp"
#include "msdrec/eval.hpp"
#include "msdrec/idf.hpp"
#include "msdrec/index.hpp"
#include "msdrec/index_io.hpp"
#include "msdrec/ingest.hpp"
#include "msdrec/recommend.hpp"
#include "msdrec/similarity.hpp"
