#pragma once
// Convenience umbrella: the whole library.

#include "formav/composites.hpp"
#include "formav/config.hpp"
#include "formav/content_validity.hpp"
#include "formav/csv.hpp"
#include "formav/dataset.hpp"
#include "formav/diagnostics.hpp"
#include "formav/errors.hpp"
#include "formav/ingest.hpp"
#include "formav/lstsq.hpp"
#include "formav/pipeline.hpp"
#include "formav/report.hpp"
#include "formav/spec_io.hpp"
#include "formav/spec_model.hpp"
#include "formav/stats.hpp"
#include "formav/synthgen.hpp"
#include "formav/workflow.hpp"
