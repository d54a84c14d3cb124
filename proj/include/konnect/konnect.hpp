#pragma once

// Everything except the HTTP transport (konnect/http.hpp).

#include "konnect/answer.hpp"
#include "konnect/date.hpp"
#include "konnect/entity_index.hpp"
#include "konnect/errors.hpp"
#include "konnect/ingest.hpp"
#include "konnect/kg.hpp"
#include "konnect/query.hpp"
#include "konnect/retrieval.hpp"
#include "konnect/service.hpp"
#include "konnect/synthetic.hpp"
