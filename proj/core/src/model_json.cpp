#include "ruinalloc/model_json.hpp"

#include <json.hpp>
#include <set>
#include <sstream>

#include "ruinalloc/errors.hpp"

namespace ruinalloc {

namespace {

using json = nlohmann::ordered_json;

// nlohmann reports byte offsets; the schema wants 1-based line/column.
std::pair<std::size_t, std::size_t> offset_to_line_col(std::string_view text,
                                                       std::size_t offset) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

[[noreturn]] void fail(const std::string& msg) { throw ParseError(msg); }

void require_known_fields(const json& obj, const std::set<std::string>& known) {
  for (const auto& item : obj.items()) {
    if (!known.count(item.key())) {
      fail("unknown field \"" + item.key() + "\" in model configuration");
    }
  }
}

Eigen::VectorXd read_vector(const json& obj, const char* key) {
  if (!obj.contains(key)) fail(std::string("missing field \"") + key + "\"");
  const json& arr = obj.at(key);
  if (!arr.is_array() || arr.empty()) {
    fail(std::string("field \"") + key + "\" must be a nonempty array");
  }
  Eigen::VectorXd v(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number()) {
      fail(std::string("field \"") + key + "\" must contain numbers only");
    }
    v[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
  }
  return v;
}

Eigen::MatrixXd read_matrix(const json& obj, const char* key) {
  const json& rows = obj.at(key);
  if (!rows.is_array() || rows.empty()) {
    fail(std::string("field \"") + key + "\" must be a nonempty array of rows");
  }
  const std::size_t n = rows.size();
  Eigen::MatrixXd m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!rows[i].is_array() || rows[i].size() != n) {
      fail(std::string("field \"") + key + "\" must be a square matrix");
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (!rows[i][j].is_number()) {
        fail(std::string("field \"") + key + "\" must contain numbers only");
      }
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          rows[i][j].get<double>();
    }
  }
  return m;
}

double read_number(const json& obj, const char* key) {
  if (!obj.contains(key)) fail(std::string("missing field \"") + key + "\"");
  if (!obj.at(key).is_number()) {
    fail(std::string("field \"") + key + "\" must be a number");
  }
  return obj.at(key).get<double>();
}

RiskModel parse_object(const json& obj) {
  if (!obj.is_object()) fail("model configuration must be a JSON object");
  if (!obj.contains("type") || !obj.at("type").is_string()) {
    fail("missing string field \"type\"");
  }
  const std::string type = obj.at("type").get<std::string>();

  if (type == "brownian") {
    const bool has_cov = obj.contains("cov");
    const bool has_sd = obj.contains("sd") || obj.contains("corr");
    if (has_cov && has_sd) {
      fail("give either \"cov\" or \"sd\"+\"corr\", not both");
    }
    BrownianModel bm;
    bm.drift = read_vector(obj, "drift");
    if (has_cov) {
      require_known_fields(obj, {"type", "drift", "cov"});
      bm.cov = read_matrix(obj, "cov");
    } else {
      require_known_fields(obj, {"type", "drift", "sd", "corr"});
      const Eigen::VectorXd sd = read_vector(obj, "sd");
      if (!obj.contains("corr")) fail("missing field \"corr\"");
      const Eigen::MatrixXd corr = read_matrix(obj, "corr");
      if (sd.size() != corr.rows()) {
        fail("\"sd\" and \"corr\" dimensions must match");
      }
      bm.cov = sd.asDiagonal() * corr * sd.asDiagonal();
    }
    return bm;
  }
  if (type == "cp_exp") {
    require_known_fields(obj, {"type", "premium", "intensity", "claim_rate"});
    CompoundPoissonExpModel cp;
    cp.premium = read_vector(obj, "premium");
    cp.intensity = read_vector(obj, "intensity");
    cp.claim_rate = read_number(obj, "claim_rate");
    return cp;
  }
  fail("unknown model type \"" + type + "\" (expected brownian or cp_exp)");
}

json vector_to_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

RiskModel model_from_json_text(std::string_view text) {
  json obj;
  try {
    obj = json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, col] = offset_to_line_col(text, e.byte);
    std::ostringstream os;
    os << "JSON parse error at line " << line << ", column " << col << ": "
       << e.what();
    throw ParseError(os.str(), line, col);
  }
  RiskModel model = parse_object(obj);
  require_valid(model);
  return model;
}

std::string model_to_json_text(const RiskModel& model, int indent) {
  json obj;
  if (const auto* bm = std::get_if<BrownianModel>(&model)) {
    obj["type"] = "brownian";
    obj["drift"] = vector_to_json(bm->drift);
    obj["cov"] = matrix_to_json(bm->cov);
  } else {
    const auto& cp = std::get<CompoundPoissonExpModel>(model);
    obj["type"] = "cp_exp";
    obj["premium"] = vector_to_json(cp.premium);
    obj["intensity"] = vector_to_json(cp.intensity);
    obj["claim_rate"] = cp.claim_rate;
  }
  return obj.dump(indent);
}

std::uint64_t model_hash(const RiskModel& model) {
  const std::string canon = model_to_json_text(model, -1);
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a 64
  for (unsigned char c : canon) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace ruinalloc
