#include "bec/io.hpp"

#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include <openssl/evp.h>

namespace bec {
namespace {

[[noreturn]] void parse_fail(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::ParseError, where + ": " + what);
}

Json parse_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // The message carries the line and column.
    parse_fail("input", e.what());
  }
}

void reject_unknown(const Json& obj, const std::string& where, const std::set<std::string>& allowed) {
  if (!obj.is_object()) parse_fail(where, "expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key())) parse_fail(where + "." + it.key(), "unknown key");
}

const Json& field(const Json& obj, const std::string& key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) parse_fail(where + "." + key, "missing");
  return *it;
}

int read_int(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) parse_fail(where, "expected an integer");
  return j.get<int>();
}

double read_double(const Json& j, const std::string& where) {
  if (!j.is_number()) parse_fail(where, "expected a number");
  return j.get<double>();
}

cplx read_complex(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    parse_fail(where, "expected a complex number [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

Mat read_matrix(const Json& j, int dim, const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim) {
    std::ostringstream os;
    os << "expected " << dim << " rows";
    parse_fail(where, os.str());
  }
  Mat m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    const std::string rw = where + "[" + std::to_string(r) + "]";
    const Json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<int>(row.size()) != dim) {
      std::ostringstream os;
      os << "expected " << dim << " entries";
      parse_fail(rw, os.str());
    }
    for (int c = 0; c < dim; ++c)
      m(r, c) = read_complex(row[static_cast<std::size_t>(c)], rw + "[" + std::to_string(c) + "]");
  }
  return m;
}

std::vector<Mat> read_matrix_list(const Json& j, int count, int dim, const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != count) {
    std::ostringstream os;
    os << "expected a list of " << count << " matrices";
    parse_fail(where, os.str());
  }
  std::vector<Mat> out;
  for (int r = 0; r < count; ++r)
    out.push_back(read_matrix(j[static_cast<std::size_t>(r)], dim, where + "[" + std::to_string(r) + "]"));
  return out;
}

Grading read_grading(const Json& j, int dim, const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim)
    parse_fail(where, "expected " + std::to_string(dim) + " entries of +1/-1");
  Grading g;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const int v = read_int(j[i], where + "[" + std::to_string(i) + "]");
    if (v != 1 && v != -1) parse_fail(where + "[" + std::to_string(i) + "]", "expected +1 or -1");
    g.push_back(v);
  }
  return g;
}

FamilyTerm read_term(const Json& j, int dim, int range, const std::string& where) {
  FamilyTerm t;
  t.on_site = j.contains("on_site") ? read_matrix(j["on_site"], dim, where + ".on_site") : Mat::Zero(dim, dim);
  if (j.contains("right_hops")) {
    t.right_hops = read_matrix_list(j["right_hops"], range, dim, where + ".right_hops");
  } else {
    t.right_hops.assign(static_cast<std::size_t>(range), Mat::Zero(dim, dim));
  }
  return t;
}

}  // namespace

ModelFile parse_model(const std::string& text, const Tolerances& tol) {
  const Json doc = parse_text(text);
  reject_unknown(doc, "model", {"dim_v", "range", "on_site", "right_hops", "left_hops", "grading"});
  const int dim = read_int(field(doc, "dim_v", "model"), "model.dim_v");
  const int range = read_int(field(doc, "range", "model"), "model.range");
  if (dim < 1) parse_fail("model.dim_v", "must be positive");
  if (range < 1) throw Error(ErrorCode::ValidationError, "RangeZero: hopping range must be at least 1");

  Mat on_site = read_matrix(field(doc, "on_site", "model"), dim, "model.on_site");
  std::vector<Mat> right = read_matrix_list(field(doc, "right_hops", "model"), range, dim, "model.right_hops");
  std::vector<Mat> left;
  if (doc.contains("left_hops")) {
    left = read_matrix_list(doc["left_hops"], range, dim, "model.left_hops");
  } else {
    for (const auto& a : right) left.push_back(a.adjoint());
  }
  std::optional<Grading> grading;
  if (doc.contains("grading")) grading = read_grading(doc["grading"], dim, "model.grading");

  try {
    return ModelFile{build_model(dim, range, std::move(on_site), std::move(left), std::move(right), tol),
                     std::move(grading)};
  } catch (const Error& e) {
    throw Error(ErrorCode::ValidationError, e.what());
  }
}

ChiralModel chiral_model(const ModelFile& file, const Tolerances& tol) {
  if (!file.grading) throw Error(ErrorCode::ValidationError, "model file has no grading");
  try {
    return chiral_split(file.model, *file.grading, tol);
  } catch (const Error& e) {
    throw Error(ErrorCode::ValidationError, e.what());
  }
}

Json complex_to_json(cplx z) { return Json::array({z.real(), z.imag()}); }

Json matrix_to_json(const Mat& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json model_to_json(const ModelParams& model, const std::optional<Grading>& grading) {
  Json j;
  j["dim_v"] = model.dim_v();
  j["range"] = model.range();
  j["on_site"] = matrix_to_json(model.on_site());
  Json right = Json::array(), left = Json::array();
  for (int r = 1; r <= model.range(); ++r) {
    right.push_back(matrix_to_json(model.right_hop(r)));
    left.push_back(matrix_to_json(model.left_hop(r)));
  }
  j["right_hops"] = std::move(right);
  j["left_hops"] = std::move(left);
  if (grading) j["grading"] = *grading;
  return j;
}

Json tolerances_to_json(const Tolerances& tol) {
  Json j = Json::object();
  for (const auto& f : tolerance_names()) j[std::string(f.name)] = tol.*(f.member);
  return j;
}

ChiralModel ModelFamily::at(double p1, double p2, const Tolerances& tol) const {
  Mat v = base.on_site + p1 * param1.term.on_site + p2 * param2.term.on_site;
  std::vector<Mat> hops;
  for (std::size_t r = 0; r < static_cast<std::size_t>(range); ++r)
    hops.push_back(base.right_hops[r] + p1 * param1.term.right_hops[r] + p2 * param2.term.right_hops[r]);
  return chiral_split(build_self_adjoint_model(std::move(v), std::move(hops), tol), grading, tol);
}

ModelFamily parse_family(const std::string& text) {
  const Json doc = parse_text(text);
  reject_unknown(doc, "family", {"dim_v", "range", "grading", "base", "param1", "param2"});
  ModelFamily f;
  f.dim_v = read_int(field(doc, "dim_v", "family"), "family.dim_v");
  f.range = read_int(field(doc, "range", "family"), "family.range");
  if (f.dim_v < 1) parse_fail("family.dim_v", "must be positive");
  if (f.range < 1) parse_fail("family.range", "must be at least 1");
  f.grading = read_grading(field(doc, "grading", "family"), f.dim_v, "family.grading");
  if (doc.contains("base")) {
    reject_unknown(doc["base"], "family.base", {"on_site", "right_hops"});
    f.base = read_term(doc["base"], f.dim_v, f.range, "family.base");
  } else {
    f.base = read_term(Json::object(), f.dim_v, f.range, "family.base");
  }
  for (auto [key, target] : {std::pair{"param1", &f.param1}, std::pair{"param2", &f.param2}}) {
    const std::string where = std::string("family.") + key;
    const Json& p = field(doc, key, "family");
    reject_unknown(p, where, {"name", "min", "max", "on_site", "right_hops"});
    const Json& name = field(p, "name", where);
    if (!name.is_string()) parse_fail(where + ".name", "expected a string");
    target->name = name.get<std::string>();
    target->min = read_double(field(p, "min", where), where + ".min");
    target->max = read_double(field(p, "max", where), where + ".max");
    target->term = read_term(p, f.dim_v, f.range, where);
  }
  return f;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw Error(ErrorCode::InvalidArgument, "SHA-256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 15]);
  }
  return out;
}

}  // namespace bec
