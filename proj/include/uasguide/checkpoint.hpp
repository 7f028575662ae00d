#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "uasguide/policy.hpp"
#include "uasguide/textio.hpp"

namespace uasguide {

// Versioned JSON snapshot of a trained policy. Doubles are serialized with
// shortest-round-trip formatting, so save -> load reproduces every parameter
// bit-exactly. The scenario fingerprint pins which world the policy was
// trained in; evaluation refuses a mismatch.
struct Checkpoint {
  int version = 1;
  ActorCritic params;
  std::string scenario_fingerprint;
  std::string control_mode;  // "static" | "heading_only" | "heading_and_speed"
  double position_scale = 0.0;  // observation divisors, informational
  double velocity_scale = 0.0;

  void save(const std::string& path) const {
    write_text_file_atomic(path, to_json().dump(2) + "\n");
  }

  static Checkpoint load(const std::string& path) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(read_text_file(path));
    } catch (const nlohmann::json::parse_error& e) {
      throw std::invalid_argument("checkpoint: " + path + ": " + e.what());
    }
    return from_json(j);
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["format"] = "uasguide-checkpoint";
    j["version"] = version;
    j["obs_dim"] = params.obs_dim();
    j["act_dim"] = params.act_dim();
    j["hidden"] = params.actor.hidden_dims();
    j["actor"] = mlp_to_json(params.actor);
    j["critic"] = mlp_to_json(params.critic);
    j["log_std"] = vector_to_json(params.log_std);
    j["scenario_fingerprint"] = scenario_fingerprint;
    j["control_mode"] = control_mode;
    j["position_scale"] = position_scale;
    j["velocity_scale"] = velocity_scale;
    return j;
  }

  static Checkpoint from_json(const nlohmann::json& j) {
    try {
      if (!j.is_object() || j.value("format", "") != "uasguide-checkpoint")
        throw std::invalid_argument("checkpoint: not a checkpoint file");
      if (j.value("version", 0) != 1)
        throw std::invalid_argument("checkpoint: unsupported version");
      Checkpoint c;
      const int obs_dim = j.at("obs_dim").get<int>();
      const int act_dim = j.at("act_dim").get<int>();
      const auto hidden = j.at("hidden").get<std::vector<int>>();
      c.params.actor = mlp_from_json(j.at("actor"), obs_dim, hidden, act_dim);
      c.params.critic = mlp_from_json(j.at("critic"), obs_dim, hidden, 1);
      c.params.log_std = vector_from_json(j.at("log_std"));
      if (c.params.log_std.size() != act_dim)
        throw std::invalid_argument("checkpoint: log_std length mismatch");
      c.scenario_fingerprint = j.at("scenario_fingerprint").get<std::string>();
      c.control_mode = j.at("control_mode").get<std::string>();
      c.position_scale = j.value("position_scale", 0.0);
      c.velocity_scale = j.value("velocity_scale", 0.0);
      return c;
    } catch (const nlohmann::json::exception& e) {
      // Missing keys / wrong-typed values surface as library exceptions; fold
      // them into the invalid-input contract.
      throw std::invalid_argument(std::string("checkpoint: ") + e.what());
    }
  }

 private:
  static nlohmann::json vector_to_json(const Eigen::VectorXd& v) {
    nlohmann::json a = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
  }

  static Eigen::VectorXd vector_from_json(const nlohmann::json& a) {
    if (!a.is_array()) throw std::invalid_argument("checkpoint: expected array");
    Eigen::VectorXd v(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) v[static_cast<Eigen::Index>(i)] = a[i].get<double>();
    return v;
  }

  // Row-major nested arrays, one entry per layer.
  static nlohmann::json mlp_to_json(const Mlp& net) {
    nlohmann::json j;
    j["weights"] = nlohmann::json::array();
    j["biases"] = nlohmann::json::array();
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
      nlohmann::json rows = nlohmann::json::array();
      const Eigen::MatrixXd& w = net.weights[l];
      for (Eigen::Index r = 0; r < w.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index col = 0; col < w.cols(); ++col) row.push_back(w(r, col));
        rows.push_back(row);
      }
      j["weights"].push_back(rows);
      j["biases"].push_back(vector_to_json(net.biases[l]));
    }
    return j;
  }

  static Mlp mlp_from_json(const nlohmann::json& j, int input_dim,
                           const std::vector<int>& hidden, int output_dim) {
    Mlp net(input_dim, hidden, output_dim);
    const auto& ws = j.at("weights");
    const auto& bs = j.at("biases");
    if (!ws.is_array() || !bs.is_array() || ws.size() != net.weights.size() ||
        bs.size() != net.biases.size())
      throw std::invalid_argument("checkpoint: layer count mismatch");
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
      Eigen::MatrixXd& w = net.weights[l];
      const auto& rows = ws[l];
      if (!rows.is_array() || rows.size() != static_cast<std::size_t>(w.rows()))
        throw std::invalid_argument("checkpoint: weight shape mismatch");
      for (Eigen::Index r = 0; r < w.rows(); ++r) {
        const auto& row = rows[static_cast<std::size_t>(r)];
        if (!row.is_array() || row.size() != static_cast<std::size_t>(w.cols()))
          throw std::invalid_argument("checkpoint: weight shape mismatch");
        for (Eigen::Index c = 0; c < w.cols(); ++c) {
          w(r, c) = row[static_cast<std::size_t>(c)].get<double>();
        }
      }
      net.biases[l] = vector_from_json(bs[l]);
      if (net.biases[l].size() != w.rows())
        throw std::invalid_argument("checkpoint: bias shape mismatch");
    }
    return net;
  }
};

}  // namespace uasguide
