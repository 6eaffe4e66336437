#pragma once

// Umbrella header for the whole toolkit. The analysis headers below are
// self-contained; cache.hpp, report.hpp and cli.hpp additionally need the
// vendored json.hpp / CLI11.hpp on the include path.

#include "epochscope/bleu.hpp"
#include "epochscope/cache.hpp"
#include "epochscope/chronology.hpp"
#include "epochscope/cli.hpp"
#include "epochscope/corpus.hpp"
#include "epochscope/correspondence.hpp"
#include "epochscope/error.hpp"
#include "epochscope/lexstats.hpp"
#include "epochscope/mt_metrics.hpp"
#include "epochscope/report.hpp"
#include "epochscope/segments.hpp"
#include "epochscope/specificity.hpp"
#include "epochscope/svd.hpp"
#include "epochscope/text.hpp"
#include "epochscope/tokenizer.hpp"
#include "epochscope/version.hpp"
