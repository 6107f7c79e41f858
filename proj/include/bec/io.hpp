#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bec/model.hpp"

namespace bec {

using Json = nlohmann::ordered_json;

/// Parsed model file:
///
///   {"dim_v": d, "range": R, "on_site": [[[re, im], ...], ...],
///    "right_hops": [A_1, ..., A_R], "left_hops": [B_1, ...] (optional, defaults to A_r^*),
///    "grading": [+1, -1, ...] (optional)}
struct ModelFile {
  ModelParams model;
  std::optional<Grading> grading;
};

/// Throws ParseError with a line/column or field path, and ValidationError
/// for model-level errors (the message of the underlying error is kept).
ModelFile parse_model(const std::string& text, const Tolerances& tol = {});

/// Requires a grading (from the file or `grading`) and a balanced chiral split.
ChiralModel chiral_model(const ModelFile& file, const Tolerances& tol = {});

Json model_to_json(const ModelParams& model, const std::optional<Grading>& grading = std::nullopt);
Json complex_to_json(cplx z);
Json matrix_to_json(const Mat& m);
Json tolerances_to_json(const Tolerances& tol);

/// Two-parameter affine family H(p1, p2) = base + p1 * P1 + p2 * P2 of self-adjoint models:
///
///   {"dim_v": d, "range": R, "grading": [...],
///    "base":   {"on_site": ..., "right_hops": [...]},
///    "param1": {"name": "t1", "min": -2, "max": 2, "on_site": ..., "right_hops": [...]},
///    "param2": {...}}
///
/// `on_site` and `right_hops` default to zero inside each term; left hops are adjoints.
struct FamilyTerm {
  Mat on_site;
  std::vector<Mat> right_hops;
};

struct FamilyParameter {
  std::string name;
  double min = 0.0;
  double max = 1.0;
  FamilyTerm term;
};

struct ModelFamily {
  int dim_v = 0;
  int range = 0;
  Grading grading;
  FamilyTerm base;
  FamilyParameter param1;
  FamilyParameter param2;

  ChiralModel at(double p1, double p2, const Tolerances& tol = {}) const;
};

ModelFamily parse_family(const std::string& text);

/// Formats a double with 17 significant digits ("%.17g"), or "nan"/"inf".
std::string format_double(double x);

/// Hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& bytes);

}  // namespace bec
