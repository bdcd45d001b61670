#pragma once

#include "partinf/bounds.hpp"
#include "partinf/certificate.hpp"
#include "partinf/errors.hpp"
#include "partinf/generator.hpp"
#include "partinf/graph.hpp"
#include "partinf/pipeline.hpp"
#include "partinf/rng.hpp"
#include "partinf/sdp.hpp"
