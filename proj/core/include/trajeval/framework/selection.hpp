#pragma once

#include <string>
#include <vector>

#include "trajeval/metrics/registry.hpp"

namespace trajeval::framework {

struct MetricChoice {
  std::string metric;
  metrics::MetricParams params;
  friend bool operator==(const MetricChoice&, const MetricChoice&) = default;
};

/// Metrics chosen for the eight taxonomy cells, in canonical cell order
/// (trajectory level first; marginal, relational, realism, task).
struct MetricSelection {
  std::string name;
  std::vector<MetricChoice> metrics;
  friend bool operator==(const MetricSelection&, const MetricSelection&) = default;
};

std::vector<std::string> preset_names();

/// `use-case-a` (category-oriented) or `use-case-b` (location-oriented).
MetricSelection preset(const std::string& name);

/// Parses the nested selection format:
///   {"name": "...", "cells": {"trajectory": {"marginal": {"i_rank": {}}, ...},
///                             "point": {...}}}
/// Parameters are numbers keyed by name, e.g. {"k": 5}.
MetricSelection selection_from_json(const std::string& text);
std::string selection_to_json(const MetricSelection& selection);

/// Throws unless every cell has at least one implemented metric registered
/// under that cell and all parameters are known.
void validate_selection(const MetricSelection& selection);

/// Stable sort of the choices into canonical cell order.
void canonicalize(MetricSelection& selection);

}  // namespace trajeval::framework
