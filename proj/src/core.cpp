#include "bec/core.hpp"

#include <limits>

namespace bec {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::RangeZero: return "RangeZero";
    case ErrorCode::NotChiral: return "NotChiral";
    case ErrorCode::UnbalancedGrading: return "UnbalancedGrading";
    case ErrorCode::ZeroMomentum: return "ZeroMomentum";
    case ErrorCode::NotSelfAdjoint: return "NotSelfAdjoint";
    case ErrorCode::SingularLeadingHop: return "SingularLeadingHop";
    case ErrorCode::SingularRightHop: return "SingularRightHop";
    case ErrorCode::BorderlineEigenvalue: return "BorderlineEigenvalue";
    case ErrorCode::ZeroMode: return "ZeroMode";
    case ErrorCode::TooFewCells: return "TooFewCells";
    case ErrorCode::GapNotCertified: return "GapNotCertified";
    case ErrorCode::AmbiguousKernel: return "AmbiguousKernel";
    case ErrorCode::NonConvergent: return "NonConvergent";
    case ErrorCode::CertificateFailed: return "CertificateFailed";
    case ErrorCode::SpectrumOnCriticalLine: return "SpectrumOnCriticalLine";
    case ErrorCode::ExhaustedRedraws: return "ExhaustedRedraws";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
  }
  return "Unknown";
}

const std::vector<ToleranceField>& tolerance_names() {
  static const std::vector<ToleranceField> fields = {
      {"self_adjoint", &Tolerances::self_adjoint}, {"numeric", &Tolerances::numeric},
      {"max_condition", &Tolerances::max_condition}, {"unit_circle", &Tolerances::unit_circle},
      {"cluster", &Tolerances::cluster},           {"kernel", &Tolerances::kernel},
      {"coeff", &Tolerances::coeff},
  };
  return fields;
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

double operator_norm(const Mat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues()(0);
}

double condition_number(const Mat& m) {
  if (m.size() == 0) return std::numeric_limits<double>::infinity();
  Eigen::JacobiSVD<Mat> svd(m);
  const auto& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

double min_singular_value(const Mat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(m);
  const auto& s = svd.singularValues();
  return s(s.size() - 1);
}

Mat direct_sum(const Mat& a, const Mat& b) {
  Mat out = Mat::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

}  // namespace bec
