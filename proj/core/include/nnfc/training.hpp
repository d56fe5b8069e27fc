// Copyright (c) 2026 nnfc contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "nnfc/adam.hpp"
#include "nnfc/gae.hpp"
#include "nnfc/policy.hpp"
#include "nnfc/reward.hpp"
#include "nnfc/rng.hpp"
#include "nnfc/vehicle.hpp"

namespace nnfc {

class KeyValueConfig;

struct PpoConfig {
  float gamma = 0.99f;
  float lambda = 0.95f;
  float clip = 0.2f;
  float lr = 3e-4f;
  int epochs = 4;
  int num_envs = 256;
  int horizon = 64;
  int minibatches = 4;
  float value_coef = 0.5f;
  float entropy_coef = 0.003f;
  float max_grad_norm = 1.0f;
  int total_updates = 2000;
  uint64_t seed = 7;
  int num_threads = 0;  // 0 = hardware concurrency

  int episode_steps = 800;
  double train_dt = 0.01;
  double init_pos_range = 2.0;     // m, uniform cube around the setpoint
  double init_vel_range = 0.2;     // m/s
  double init_angvel_range = 0.2;  // rad/s

  int eval_every = 25;
  int eval_episodes = 64;
  /// Stop as soon as the best eval error reaches this value; <= 0 disables.
  float target_eval_error = 0.15f;

  void validate() const;
  static PpoConfig fromConfig(const KeyValueConfig& cfg);
};

/// Rectangular num_envs × horizon experience store, sample index
/// s = step * num_envs + env.
struct RolloutBuffer {
  int num_envs = 0;
  int horizon = 0;
  std::vector<float> obs;       // [sample][kObsDim]
  std::vector<float> pre_tanh;  // [sample][kActDim]
  std::vector<float> log_prob;  // [sample]
  std::vector<float> rewards;
  std::vector<float> values;
  std::vector<uint8_t> dones;
  std::vector<float> bootstrap_values;  // [env]

  void resize(int envs, int steps);
  size_t sampleCount() const { return size_t(num_envs) * size_t(horizon); }
};

/// One simulated vehicle with the training episode layout: setpoint at the
/// origin, random initial pose within the configured ranges, 800 steps at
/// train_dt, termination via the shared predicate.
class TrainEnv {
 public:
  TrainEnv(const VehicleParams& params, const RewardWeights& weights,
           const PpoConfig& cfg, uint64_t seed);

  void reset();

  struct StepResult {
    float reward = 0.0f;
    bool done = false;
  };
  StepResult step(const ActionVec& action);

  const RigidBodyState& state() const { return state_; }
  const Eigen::Vector3d& setpoint() const { return setpoint_; }
  double positionError() const { return (setpoint_ - state_.position).norm(); }
  float episodeReward() const { return episode_reward_; }
  int episodeSteps() const { return episode_steps_; }

 private:
  VehicleParams params_;
  RewardWeights weights_;
  const PpoConfig* cfg_;
  Rng rng_;
  RigidBodyState state_;
  Eigen::Vector3d setpoint_ = Eigen::Vector3d::Zero();
  ActionVec prev_action_{};
  float episode_reward_ = 0.0f;
  int episode_steps_ = 0;
};

struct UpdateStats {
  float policy_loss = 0.0f;
  float value_loss = 0.0f;  // raw MSE
  float entropy = 0.0f;
  float clip_fraction = 0.0f;
  float approx_kl = 0.0f;
};

struct CollectStats {
  float mean_episode_reward = 0.0f;
  float mean_final_pos_error = 0.0f;
  int episodes_finished = 0;
};

/// PPO with clipped surrogate, GAE, per-minibatch advantage normalization,
/// a tanh-squashed Gaussian actor and a separate critic. Rollout collection
/// fans out over fixed env chunks and gradient accumulation over fixed sample
/// chunks, so results are bit-identical for any thread count.
class PpoTrainer {
 public:
  PpoTrainer(const VehicleParams& params, const RewardWeights& weights,
             const PpoConfig& cfg);

  /// Fills the buffer with `horizon` steps from every env (episodes reset
  /// inline) and records bootstrap values.
  void collect(RolloutBuffer& buffer);
  CollectStats lastCollectStats() const { return collect_stats_; }

  /// One PPO update over a full buffer: cfg.epochs shuffled-minibatch passes,
  /// clipped surrogate + value + entropy loss, global grad-norm clip, Adam.
  /// Throws DivergenceError on a non-finite loss.
  UpdateStats update(const RolloutBuffer& buffer);

  /// Mean clipped-surrogate objective over the whole buffer under the current
  /// parameters (whole-buffer advantage normalization); diagnostic only.
  float surrogateLoss(const RolloutBuffer& buffer) const;

  /// Mean over eval episodes of the mean position error across the final 100
  /// steps (terminal state frozen when an episode ends early). Deterministic:
  /// episode i always starts from the same seeded initial state.
  float evaluate() const;

  GaussianTanhPolicy& policy() { return policy_; }
  const GaussianTanhPolicy& policy() const { return policy_; }
  Mlp<float>& critic() { return critic_; }
  const Mlp<float>& critic() const { return critic_; }

  std::vector<float> flatParams() const { return flat_params_; }
  void setFlatParams(const std::vector<float>& params);
  /// CRC-32 of the flat parameter bytes; determinism checksum.
  uint32_t paramsCrc() const;

  int numThreads() const { return num_threads_; }

 private:
  struct GradAccumulator {
    std::vector<float> grads;
    double pg_loss = 0.0;
    double v_loss = 0.0;
    double kl = 0.0;
    uint64_t clipped = 0;
    uint64_t samples = 0;

    void reset(size_t param_count) {
      grads.assign(param_count, 0.0f);
      pg_loss = 0.0;
      v_loss = 0.0;
      kl = 0.0;
      clipped = 0;
      samples = 0;
    }
  };

  void syncNetsFromFlat();
  void computeAdvantages(const RolloutBuffer& buffer, std::vector<float>& advantages,
                         std::vector<float>& returns) const;

  VehicleParams params_;
  RewardWeights weights_;
  PpoConfig cfg_;
  GaussianTanhPolicy policy_;
  Mlp<float> critic_;
  std::vector<TrainEnv> envs_;
  std::vector<float> flat_params_;
  Adam<float> adam_;
  Rng shuffle_rng_;
  int num_threads_ = 1;
  uint64_t collect_counter_ = 0;
  std::vector<GradAccumulator> grad_chunks_;
  CollectStats collect_stats_;
  float last_mean_reward_ = 0.0f;
  float last_mean_final_err_ = 0.0f;
};

struct TrainResult {
  GaussianTanhPolicy policy;  // best-eval snapshot
  Mlp<float> critic;
  std::string curves_csv;
  float best_eval_error = std::numeric_limits<float>::infinity();
  int updates_run = 0;
  uint32_t params_crc = 0;
};

/// Full training drive: collect/update loop with periodic deterministic
/// evaluation, best-checkpoint tracking and optional early stop at the target
/// eval error. Progress callback fires once per update.
TrainResult train(const VehicleParams& params, const RewardWeights& weights,
                  const PpoConfig& cfg,
                  const std::function<void(int, const UpdateStats&, const CollectStats&)>&
                      progress = {});

}  // namespace nnfc
