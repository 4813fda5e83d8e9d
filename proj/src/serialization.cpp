#include "simplexia/serialization.hpp"

#include <cmath>
#include <fstream>

namespace simplexia {

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(number_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json vector_to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(number_to_json(v(i)));
  return out;
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array()) throw ParseError("expected an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  Eigen::Index cols = -1;
  Matrix m;
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array()) throw ParseError("row " + std::to_string(i) + " is not an array");
    if (cols < 0) {
      cols = static_cast<Eigen::Index>(row.size());
      m.resize(rows, cols);
    } else if (static_cast<Eigen::Index>(row.size()) != cols) {
      throw ParseError("ragged matrix at row " + std::to_string(i));
    }
    for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = number_from_json(row[static_cast<std::size_t>(k)]);
  }
  return m;
}

Vector vector_from_json(const Json& j) {
  if (!j.is_array()) throw ParseError("expected an array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = number_from_json(j[i]);
  return v;
}

Json number_to_json(double x) {
  if (std::isinf(x)) return x > 0 ? Json("inf") : Json("-inf");
  return x;
}

double number_from_json(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "infinity" || s == "Infinity" || s == "∞") return kInf;
    if (s == "-inf") return -kInf;
  }
  throw ParseError("expected a number, got " + j.dump());
}

Json to_json(const Simplex& s) {
  Json out;
  out["dim"] = s.dim();
  out["vertices"] = matrix_to_json(s.vertices());
  return out;
}

Simplex simplex_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("simplex must be a JSON object");
  if (!j.contains("vertices")) throw ParseError("simplex is missing \"vertices\"");
  const Matrix v = matrix_from_json(j.at("vertices"));
  if (j.contains("dim")) {
    if (!j.at("dim").is_number_integer()) throw ParseError("\"dim\" must be an integer");
    const int d = j.at("dim").get<int>();
    if (v.cols() != d || v.rows() != d + 1)
      throw ParseError("\"dim\" = " + std::to_string(d) + " needs " + std::to_string(d + 1) + " vertices with " +
                       std::to_string(d) + " coordinates");
  }
  if (v.rows() < 2 || v.rows() != v.cols() + 1)
    throw ParseError("expected d + 1 vertices with d coordinates, got " + std::to_string(v.rows()) + " x " +
                     std::to_string(v.cols()));
  if (!v.allFinite()) throw ParseError("vertex coordinates must be finite");
  return Simplex(v);
}

Simplex read_simplex_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  return simplex_from_json(j);
}

Json to_json(const ApproxResult& r) {
  Json out;
  out["error"] = number_to_json(r.error);
  out["a"] = vector_to_json(r.minimizer.a);
  out["c"] = number_to_json(r.minimizer.c);
  out["evaluator"] = to_string(r.evaluator);
  out["flags"] = r.flags;
  return out;
}

Json to_json(const AsymParams& params) {
  Json out;
  out["p"] = number_to_json(params.p);
  out["alpha"] = number_to_json(params.alpha);
  out["beta"] = number_to_json(params.beta);
  return out;
}

Json to_json(const CanonicalFrame& frame) {
  Json out;
  out["pair"] = {frame.pair.first, frame.pair.second};
  out["others"] = frame.others;
  out["delta"] = frame.delta;
  out["b"] = vector_to_json(frame.b);
  out["A"] = matrix_to_json(frame.A);
  out["rotation"] = matrix_to_json(frame.motion.rotation);
  out["origin"] = vector_to_json(frame.motion.origin);
  return out;
}

Json to_json(const SymmetrizationReport& r) {
  Json out;
  out["pair"] = {r.pair.first, r.pair.second};
  out["frame"] = to_json(r.frame);
  out["y"] = vector_to_json(r.y);
  out["D"] = vector_to_json(r.D);
  out["U"] = matrix_to_json(r.U);
  out["Qdiag"] = vector_to_json(r.qdiag);
  out["Ubar"] = matrix_to_json(r.ubar);
  out["M"] = matrix_to_json(r.M);
  out["h"] = vector_to_json(r.h);
  out["S"] = matrix_to_json(r.S);
  out["Shat"] = matrix_to_json(r.Shat);
  out["F"] = matrix_to_json(r.F);
  out["T_tilde"] = to_json(r.T_tilde);
  out["T_hat"] = to_json(r.T_hat);
  out["T_star"] = to_json(r.T_star);
  out["factor"] = r.factor;
  out["symmetric"] = r.symmetric;
  out["checks"] = {
      {"cholesky_residual", r.cholesky_residual},
      {"det_S", r.det_S},
      {"det_Shat", r.det_Shat},
      {"det_F", r.det_F},
      {"determinant_lemma_residual", r.determinant_lemma_residual},
      {"volume_T_tilde", volume(r.T_tilde)},
      {"volume_T_hat", volume(r.T_hat)},
      {"volume_T_star", volume(r.T_star)},
  };
  return out;
}

}  // namespace simplexia
