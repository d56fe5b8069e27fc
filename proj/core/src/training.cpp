// Copyright (c) 2026 nnfc contributors
// SPDX-License-Identifier: Apache-2.0

#include "nnfc/training.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <thread>

#include "nnfc/errors.hpp"
#include "nnfc/keyvalue_config.hpp"
#include "nnfc/modelpack.hpp"
#include "nnfc/observation.hpp"

namespace nnfc {

namespace {

constexpr double kHalfLog2Pi = 0.91893853320467274178;
// Work is split into this many fixed chunks independent of the thread count,
// so gradient reduction order (and therefore every float) never changes.
constexpr int kWorkChunks = 32;

/// Runs fn(chunk) for chunk in [0, num_chunks). Chunks pull from an atomic
/// counter; every chunk writes only to its own slot, so scheduling order
/// cannot affect results.
void parallelChunks(int num_chunks, int num_threads,
                    const std::function<void(int)>& fn) {
  if (num_threads <= 1 || num_chunks <= 1) {
    for (int c = 0; c < num_chunks; ++c) fn(c);
    return;
  }
  std::atomic<int> next{0};
  auto worker = [&] {
    for (;;) {
      const int c = next.fetch_add(1);
      if (c >= num_chunks) break;
      fn(c);
    }
  };
  const int n = std::min(num_threads, num_chunks);
  std::vector<std::thread> threads;
  threads.reserve(size_t(n - 1));
  for (int t = 1; t < n; ++t) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();
}

struct ChunkRange {
  int begin;
  int end;
};

ChunkRange chunkRange(int total, int num_chunks, int chunk) {
  const int base = total / num_chunks;
  const int rem = total % num_chunks;
  const int begin = chunk * base + std::min(chunk, rem);
  const int size = base + (chunk < rem ? 1 : 0);
  return {begin, begin + size};
}

}  // namespace

void PpoConfig::validate() const {
  if (!(gamma > 0.0f && gamma <= 1.0f)) throw ConfigError("ppo.gamma must be in (0,1]");
  if (!(lambda > 0.0f && lambda <= 1.0f)) throw ConfigError("ppo.lambda must be in (0,1]");
  if (!(clip > 0.0f)) throw ConfigError("ppo.clip must be > 0");
  if (!(lr > 0.0f)) throw ConfigError("ppo.lr must be > 0");
  if (epochs < 1 || num_envs < 1 || horizon < 1 || minibatches < 1) {
    throw ConfigError("ppo epochs/num_envs/horizon/minibatches must be >= 1");
  }
  if ((num_envs * horizon) % minibatches != 0) {
    throw ConfigError("ppo.minibatches must divide num_envs * horizon");
  }
  if (episode_steps < 1) throw ConfigError("ppo.episode_steps must be >= 1");
  if (!(train_dt > 0.0 && train_dt <= 0.05)) {
    throw ConfigError("ppo.train_dt must be in (0, 0.05]");
  }
}

PpoConfig PpoConfig::fromConfig(const KeyValueConfig& cfg) {
  PpoConfig c;
  c.gamma = float(cfg.getDouble("ppo.gamma", c.gamma));
  c.lambda = float(cfg.getDouble("ppo.lambda", c.lambda));
  c.clip = float(cfg.getDouble("ppo.clip", c.clip));
  c.lr = float(cfg.getDouble("ppo.lr", c.lr));
  c.epochs = cfg.getInt("ppo.epochs", c.epochs);
  c.num_envs = cfg.getInt("ppo.num_envs", c.num_envs);
  c.horizon = cfg.getInt("ppo.horizon", c.horizon);
  c.minibatches = cfg.getInt("ppo.minibatches", c.minibatches);
  c.value_coef = float(cfg.getDouble("ppo.value_coef", c.value_coef));
  c.entropy_coef = float(cfg.getDouble("ppo.entropy_coef", c.entropy_coef));
  c.max_grad_norm = float(cfg.getDouble("ppo.max_grad_norm", c.max_grad_norm));
  c.total_updates = cfg.getInt("ppo.total_updates", c.total_updates);
  c.seed = uint64_t(cfg.getInt("ppo.seed", int(c.seed)));
  c.num_threads = cfg.getInt("ppo.num_threads", c.num_threads);
  c.episode_steps = cfg.getInt("ppo.episode_steps", c.episode_steps);
  c.train_dt = cfg.getDouble("ppo.train_dt", c.train_dt);
  c.init_pos_range = cfg.getDouble("train.init_pos_range", c.init_pos_range);
  c.init_vel_range = cfg.getDouble("train.init_vel_range", c.init_vel_range);
  c.init_angvel_range = cfg.getDouble("train.init_angvel_range", c.init_angvel_range);
  c.eval_every = cfg.getInt("ppo.eval_every", c.eval_every);
  c.eval_episodes = cfg.getInt("ppo.eval_episodes", c.eval_episodes);
  c.target_eval_error = float(cfg.getDouble("ppo.target_eval_error", c.target_eval_error));
  c.validate();
  return c;
}

void RolloutBuffer::resize(int envs, int steps) {
  num_envs = envs;
  horizon = steps;
  const size_t n = sampleCount();
  obs.assign(n * kObsDim, 0.0f);
  pre_tanh.assign(n * kActDim, 0.0f);
  log_prob.assign(n, 0.0f);
  rewards.assign(n, 0.0f);
  values.assign(n, 0.0f);
  dones.assign(n, 0);
  bootstrap_values.assign(size_t(envs), 0.0f);
}

TrainEnv::TrainEnv(const VehicleParams& params, const RewardWeights& weights,
                   const PpoConfig& cfg, uint64_t seed)
    : params_(params), weights_(weights), cfg_(&cfg), rng_(seed) {
  reset();
}

void TrainEnv::reset() {
  const double pr = cfg_->init_pos_range;
  const double vr = cfg_->init_vel_range;
  const double ar = cfg_->init_angvel_range;

  state_ = RigidBodyState{};
  state_.position = setpoint_ + Eigen::Vector3d(rng_.uniform(-pr, pr),
                                                rng_.uniform(-pr, pr),
                                                rng_.uniform(-pr, pr));
  const double yaw = rng_.uniform(-M_PI, M_PI);
  state_.attitude =
      Eigen::Quaterniond(std::cos(yaw / 2.0), 0.0, 0.0, std::sin(yaw / 2.0));
  state_.velocity = Eigen::Vector3d(rng_.uniform(-vr, vr), rng_.uniform(-vr, vr),
                                    rng_.uniform(-vr, vr));
  state_.angular_velocity = Eigen::Vector3d(
      rng_.uniform(-ar, ar), rng_.uniform(-ar, ar), rng_.uniform(-ar, ar));
  state_.motor_speed.fill(params_.hoverSpeed());

  const float hover_action = float(2.0 * params_.hoverCommand() - 1.0);
  prev_action_.fill(hover_action);
  episode_reward_ = 0.0f;
  episode_steps_ = 0;
}

TrainEnv::StepResult TrainEnv::step(const ActionVec& action) {
  StepResult result;
  const std::array<double, 4> u = actionToMotorCommand(action);
  std::array<double, 4> commanded;
  for (int i = 0; i < 4; ++i) commanded[size_t(i)] = u[size_t(i)] * params_.omega_max;

  ++episode_steps_;
  try {
    state_ = integrate(state_, commanded, cfg_->train_dt, params_);
  } catch (const SimulationDivergedError&) {
    result.reward = float(-weights_.crash_penalty);
    result.done = true;
    episode_reward_ += result.reward;
    return result;
  }

  result.reward = float(reward(state_, action, prev_action_, setpoint_, weights_));
  result.done = terminated(state_, setpoint_) || episode_steps_ >= cfg_->episode_steps;
  prev_action_ = action;
  episode_reward_ += result.reward;
  return result;
}

PpoTrainer::PpoTrainer(const VehicleParams& params, const RewardWeights& weights,
                       const PpoConfig& cfg)
    : params_(params),
      weights_(weights),
      cfg_(cfg),
      critic_([&] {
        Rng rng(mixSeed(cfg.seed, 1));
        return makeCritic(rng);
      }()),
      flat_params_(),
      adam_(0, cfg.lr),
      shuffle_rng_(mixSeed(cfg.seed, 2)) {
  cfg_.validate();
  params_.validate();
  weights_.validate();

  Rng policy_rng(mixSeed(cfg_.seed, 0));
  policy_.initWeights(policy_rng);

  const size_t total = policy_.net().paramCount() + kActDim + critic_.paramCount();
  flat_params_.assign(total, 0.0f);
  adam_ = Adam<float>(total, cfg_.lr);

  // Flat layout: [policy | log_std | critic].
  policy_.net().flattenParams(std::span<float>(flat_params_.data(),
                                               policy_.net().paramCount()));
  for (int i = 0; i < kActDim; ++i) {
    flat_params_[policy_.net().paramCount() + size_t(i)] = policy_.logStd()[size_t(i)];
  }
  critic_.flattenParams(std::span<float>(
      flat_params_.data() + policy_.net().paramCount() + kActDim,
      critic_.paramCount()));

  num_threads_ = cfg_.num_threads > 0
                     ? cfg_.num_threads
                     : std::max(1u, std::thread::hardware_concurrency());

  envs_.reserve(size_t(cfg_.num_envs));
  for (int e = 0; e < cfg_.num_envs; ++e) {
    envs_.emplace_back(params_, weights_, cfg_, mixSeed(cfg_.seed, 100 + uint64_t(e)));
  }
}

void PpoTrainer::setFlatParams(const std::vector<float>& params) {
  if (params.size() != flat_params_.size()) {
    throw std::invalid_argument("setFlatParams: size mismatch");
  }
  flat_params_ = params;
  syncNetsFromFlat();
}

void PpoTrainer::syncNetsFromFlat() {
  const size_t pn = policy_.net().paramCount();
  policy_.net().unflattenParams(std::span<const float>(flat_params_.data(), pn));
  for (int i = 0; i < kActDim; ++i) {
    policy_.logStd()[size_t(i)] = flat_params_[pn + size_t(i)];
  }
  critic_.unflattenParams(
      std::span<const float>(flat_params_.data() + pn + kActDim, critic_.paramCount()));
}

uint32_t PpoTrainer::paramsCrc() const {
  return crc32(std::span<const uint8_t>(
      reinterpret_cast<const uint8_t*>(flat_params_.data()),
      flat_params_.size() * sizeof(float)));
}

void PpoTrainer::collect(RolloutBuffer& buffer) {
  buffer.resize(cfg_.num_envs, cfg_.horizon);

  struct EpisodeRecord {
    double reward_sum = 0.0;
    double final_err_sum = 0.0;
    int count = 0;
  };
  const int chunks = std::min(kWorkChunks, cfg_.num_envs);
  std::vector<EpisodeRecord> chunk_records(static_cast<size_t>(chunks));

  // Per-env action-noise streams, independent of the env reset streams.
  // Rebuilding the Rng from (seed, update, env) every collect keeps the
  // whole rollout a pure function of the master seed and the update index.
  const uint64_t collect_stream = collect_counter_++;

  parallelChunks(chunks, num_threads_, [&](int chunk) {
    const ChunkRange range = chunkRange(cfg_.num_envs, chunks, chunk);
    Mlp<float>::Cache policy_cache;
    Mlp<float>::Cache critic_cache;
    EpisodeRecord& record = chunk_records[size_t(chunk)];

    for (int e = range.begin; e < range.end; ++e) {
      TrainEnv& env = envs_[size_t(e)];
      Rng action_rng(mixSeed(cfg_.seed, (collect_stream << 20) + 200000 + uint64_t(e)));

      for (int step = 0; step < cfg_.horizon; ++step) {
        const size_t s = size_t(step) * size_t(cfg_.num_envs) + size_t(e);
        const Observation obs = buildObservation(env.state(), env.setpoint());
        std::copy(obs.begin(), obs.end(), buffer.obs.begin() + ptrdiff_t(s * kObsDim));

        policy_.meanForward(std::span<const float>(obs.data(), obs.size()),
                            policy_cache);
        const GaussianTanhPolicy::Sample sample =
            policy_.sample(policy_cache.output, action_rng);

        critic_.forward(std::span<const float>(obs.data(), obs.size()), critic_cache);
        const float value = critic_cache.output[0];

        std::copy(sample.pre_tanh.begin(), sample.pre_tanh.end(),
                  buffer.pre_tanh.begin() + ptrdiff_t(s * kActDim));
        buffer.log_prob[s] = sample.log_prob;
        buffer.values[s] = value;

        const TrainEnv::StepResult sr = env.step(sample.action);
        buffer.rewards[s] = sr.reward;
        buffer.dones[s] = sr.done ? 1 : 0;

        if (sr.done) {
          record.reward_sum += double(env.episodeReward());
          record.final_err_sum += env.positionError();
          ++record.count;
          env.reset();
        }
      }

      const Observation next_obs = buildObservation(env.state(), env.setpoint());
      critic_.forward(std::span<const float>(next_obs.data(), next_obs.size()),
                      critic_cache);
      buffer.bootstrap_values[size_t(e)] = critic_cache.output[0];
    }
  });

  double reward_sum = 0.0;
  double err_sum = 0.0;
  int count = 0;
  for (const auto& record : chunk_records) {
    reward_sum += record.reward_sum;
    err_sum += record.final_err_sum;
    count += record.count;
  }
  if (count > 0) {
    last_mean_reward_ = float(reward_sum / count);
    last_mean_final_err_ = float(err_sum / count);
  }
  collect_stats_ = {last_mean_reward_, last_mean_final_err_, count};
}

void PpoTrainer::computeAdvantages(const RolloutBuffer& buffer,
                                   std::vector<float>& advantages,
                                   std::vector<float>& returns) const {
  const size_t n = buffer.sampleCount();
  advantages.resize(n);
  returns.resize(n);
  std::vector<float> env_rewards(size_t(buffer.horizon));
  std::vector<float> env_values(size_t(buffer.horizon));
  std::vector<uint8_t> env_dones(size_t(buffer.horizon));
  for (int e = 0; e < buffer.num_envs; ++e) {
    for (int t = 0; t < buffer.horizon; ++t) {
      const size_t s = size_t(t) * size_t(buffer.num_envs) + size_t(e);
      env_rewards[size_t(t)] = buffer.rewards[s];
      env_values[size_t(t)] = buffer.values[s];
      env_dones[size_t(t)] = buffer.dones[s];
    }
    const GaeResult res =
        gae(env_rewards, env_values, buffer.bootstrap_values[size_t(e)], env_dones,
            double(cfg_.gamma), double(cfg_.lambda));
    for (int t = 0; t < buffer.horizon; ++t) {
      const size_t s = size_t(t) * size_t(buffer.num_envs) + size_t(e);
      advantages[s] = float(res.advantages[size_t(t)]);
      returns[s] = float(res.returns[size_t(t)]);
    }
  }
}

UpdateStats PpoTrainer::update(const RolloutBuffer& buffer) {
  const size_t n = buffer.sampleCount();
  if (n == 0) throw std::invalid_argument("PpoTrainer::update: empty buffer");
  const size_t mb_size = n / size_t(cfg_.minibatches);

  std::vector<float> advantages;
  std::vector<float> returns;
  computeAdvantages(buffer, advantages, returns);

  const size_t pn = policy_.net().paramCount();
  const size_t total_params = flat_params_.size();

  const int chunks = std::min<int>(kWorkChunks, int(mb_size));
  if (grad_chunks_.size() != size_t(chunks)) {
    grad_chunks_.assign(size_t(chunks), GradAccumulator{});
  }

  std::vector<size_t> perm(n);
  std::iota(perm.begin(), perm.end(), size_t(0));
  std::vector<float> norm_adv(mb_size);
  std::vector<float> grads(total_params);

  double pg_loss_sum = 0.0;
  double v_loss_sum = 0.0;
  double kl_sum = 0.0;
  uint64_t clip_count = 0;
  uint64_t sample_count = 0;

  for (int epoch = 0; epoch < cfg_.epochs; ++epoch) {
    // Fisher-Yates with the trainer's own stream; stdlib shuffle is not
    // pinned across implementations.
    for (size_t i = n - 1; i > 0; --i) {
      const size_t j = shuffle_rng_.uniformInt(i + 1);
      std::swap(perm[i], perm[j]);
    }

    for (int mb = 0; mb < cfg_.minibatches; ++mb) {
      const size_t* idx = perm.data() + size_t(mb) * mb_size;

      double mean = 0.0;
      for (size_t k = 0; k < mb_size; ++k) mean += double(advantages[idx[k]]);
      mean /= double(mb_size);
      double var = 0.0;
      for (size_t k = 0; k < mb_size; ++k) {
        const double d = double(advantages[idx[k]]) - mean;
        var += d * d;
      }
      const double std_dev = std::sqrt(var / double(mb_size));
      for (size_t k = 0; k < mb_size; ++k) {
        norm_adv[k] = float((double(advantages[idx[k]]) - mean) / (std_dev + 1e-8));
      }

      parallelChunks(chunks, num_threads_, [&](int chunk) {
        GradAccumulator& acc = grad_chunks_[size_t(chunk)];
        acc.reset(total_params);
        const ChunkRange range = chunkRange(int(mb_size), chunks, chunk);

        Mlp<float>::Cache policy_cache;
        Mlp<float>::Cache critic_cache;
        std::array<float, kActDim> grad_mean{};
        std::array<float, 1> grad_value{};

        std::span<float> policy_grads(acc.grads.data(), pn);
        std::span<float> critic_grads(acc.grads.data() + pn + kActDim,
                                      critic_.paramCount());
        float* logstd_grads = acc.grads.data() + pn;

        for (int k = range.begin; k < range.end; ++k) {
          const size_t s = idx[k];
          const std::span<const float> obs(buffer.obs.data() + s * kObsDim, kObsDim);

          policy_.meanForward(obs, policy_cache);
          critic_.forward(obs, critic_cache);
          const double value = double(critic_cache.output[0]);

          double logp = 0.0;
          std::array<double, kActDim> dlogp_dmu{};
          std::array<double, kActDim> dlogp_dlogstd{};
          for (int i = 0; i < kActDim; ++i) {
            const double log_std = double(policy_.logStd()[size_t(i)]);
            const double sigma = std::exp(log_std);
            const double z = double(buffer.pre_tanh[s * kActDim + size_t(i)]);
            const double mu = double(policy_cache.output[size_t(i)]);
            const double t = (z - mu) / sigma;
            const double a = std::tanh(z);
            logp += -0.5 * t * t - log_std - kHalfLog2Pi;
            logp -= std::log(1.0 - a * a + double(kTanhCorrectionEps));
            dlogp_dmu[size_t(i)] = t / sigma;
            dlogp_dlogstd[size_t(i)] = t * t - 1.0;
          }

          const double ratio = std::exp(logp - double(buffer.log_prob[s]));
          const double adv = double(norm_adv[k]);
          const double clipped_ratio =
              std::clamp(ratio, 1.0 - double(cfg_.clip), 1.0 + double(cfg_.clip));
          const double surr_unclipped = ratio * adv;
          const double surr_clipped = clipped_ratio * adv;
          const bool take_unclipped = surr_unclipped <= surr_clipped;
          const double pg_loss = -std::min(surr_unclipped, surr_clipped);
          const double dpg_dlogp = take_unclipped ? -adv * ratio : 0.0;

          for (int i = 0; i < kActDim; ++i) {
            grad_mean[size_t(i)] = float(dpg_dlogp * dlogp_dmu[size_t(i)]);
            logstd_grads[i] += float(dpg_dlogp * dlogp_dlogstd[size_t(i)] -
                                     double(cfg_.entropy_coef));
          }
          policy_.net().backward(policy_cache, grad_mean, policy_grads);

          const double v_err = value - double(returns[s]);
          grad_value[0] = float(2.0 * double(cfg_.value_coef) * v_err);
          critic_.backward(critic_cache, grad_value, critic_grads);

          acc.pg_loss += pg_loss;
          acc.v_loss += v_err * v_err;
          acc.kl += (ratio - 1.0) - std::log(ratio);
          if (std::abs(ratio - 1.0) > double(cfg_.clip)) ++acc.clipped;
          ++acc.samples;
        }
      });

      std::fill(grads.begin(), grads.end(), 0.0f);
      for (const auto& acc : grad_chunks_) {
        for (size_t p = 0; p < total_params; ++p) grads[p] += acc.grads[p];
        pg_loss_sum += acc.pg_loss;
        v_loss_sum += acc.v_loss;
        kl_sum += acc.kl;
        clip_count += acc.clipped;
        sample_count += acc.samples;
      }
      const float inv_mb = 1.0f / float(mb_size);
      for (float& g : grads) g *= inv_mb;

      double norm_sq = 0.0;
      for (float g : grads) norm_sq += double(g) * double(g);
      const double norm = std::sqrt(norm_sq);
      if (!std::isfinite(norm)) {
        throw DivergenceError("ppo update produced a non-finite gradient");
      }
      if (norm > double(cfg_.max_grad_norm)) {
        const float scale = float(double(cfg_.max_grad_norm) / norm);
        for (float& g : grads) g *= scale;
      }

      adam_.step(flat_params_, grads);
      for (int i = 0; i < kActDim; ++i) {
        float& v = flat_params_[pn + size_t(i)];
        v = std::clamp(v, kLogStdMin, kLogStdMax);
      }
      syncNetsFromFlat();
    }
  }

  UpdateStats stats;
  stats.policy_loss = float(pg_loss_sum / double(sample_count));
  stats.value_loss = float(v_loss_sum / double(sample_count));
  stats.entropy = policy_.entropy();
  stats.clip_fraction = float(double(clip_count) / double(sample_count));
  stats.approx_kl = float(kl_sum / double(sample_count));
  if (!std::isfinite(stats.policy_loss) || !std::isfinite(stats.value_loss) ||
      !std::isfinite(stats.approx_kl)) {
    throw DivergenceError("ppo update produced non-finite statistics");
  }
  return stats;
}

float PpoTrainer::surrogateLoss(const RolloutBuffer& buffer) const {
  std::vector<float> advantages;
  std::vector<float> returns;
  computeAdvantages(buffer, advantages, returns);

  double mean = 0.0;
  for (float a : advantages) mean += double(a);
  mean /= double(advantages.size());
  double var = 0.0;
  for (float a : advantages) {
    const double d = double(a) - mean;
    var += d * d;
  }
  const double std_dev = std::sqrt(var / double(advantages.size()));

  Mlp<float>::Cache cache;
  double loss = 0.0;
  for (size_t s = 0; s < buffer.sampleCount(); ++s) {
    const std::span<const float> obs(buffer.obs.data() + s * kObsDim, kObsDim);
    policy_.meanForward(obs, cache);
    const float logp = policy_.logProbOfPreTanh(
        std::span<const float>(buffer.pre_tanh.data() + s * kActDim, kActDim),
        cache.output);
    const double ratio = std::exp(double(logp) - double(buffer.log_prob[s]));
    const double adv = (double(advantages[s]) - mean) / (std_dev + 1e-8);
    const double clipped =
        std::clamp(ratio, 1.0 - double(cfg_.clip), 1.0 + double(cfg_.clip));
    loss += -std::min(ratio * adv, clipped * adv);
  }
  return float(loss / double(buffer.sampleCount()));
}

float PpoTrainer::evaluate() const {
  const int episodes = cfg_.eval_episodes;
  const int chunks = std::min(kWorkChunks, episodes);
  std::vector<double> chunk_sums(size_t(chunks), 0.0);

  parallelChunks(chunks, num_threads_, [&](int chunk) {
    const ChunkRange range = chunkRange(episodes, chunks, chunk);
    double sum = 0.0;
    for (int ep = range.begin; ep < range.end; ++ep) {
      TrainEnv env(params_, weights_, cfg_, mixSeed(cfg_.seed, 1000000 + uint64_t(ep)));
      const int window_start = cfg_.episode_steps - 100;
      double window_sum = 0.0;
      int window_count = 0;
      bool done = false;
      double frozen_err = 0.0;
      for (int step = 0; step < cfg_.episode_steps; ++step) {
        if (!done) {
          const Observation obs = buildObservation(env.state(), env.setpoint());
          const ActionVec action = policy_.deterministicAction(obs);
          const TrainEnv::StepResult sr = env.step(action);
          if (sr.done) {
            done = true;
            frozen_err = env.positionError();
          }
        }
        if (step >= window_start) {
          window_sum += done ? frozen_err : env.positionError();
          ++window_count;
        }
      }
      sum += window_sum / double(window_count);
    }
    chunk_sums[size_t(chunk)] = sum;
  });

  double total = 0.0;
  for (double s : chunk_sums) total += s;
  return float(total / double(episodes));
}

TrainResult train(const VehicleParams& params, const RewardWeights& weights,
                  const PpoConfig& cfg,
                  const std::function<void(int, const UpdateStats&, const CollectStats&)>&
                      progress) {
  PpoTrainer trainer(params, weights, cfg);
  RolloutBuffer buffer;

  TrainResult result;
  std::vector<float> best_params = trainer.flatParams();
  std::string csv =
      "update,mean_episode_reward,mean_final_pos_error,episodes,policy_loss,"
      "value_loss,entropy,clip_fraction,approx_kl,eval_error\n";
  char row[320];

  int update = 0;
  for (update = 1; update <= cfg.total_updates; ++update) {
    trainer.collect(buffer);
    const UpdateStats stats = trainer.update(buffer);
    const CollectStats cstats = trainer.lastCollectStats();

    if (!std::isfinite(cstats.mean_episode_reward)) {
      throw DivergenceError("training diverged: mean episode reward is not finite");
    }

    const bool do_eval =
        (cfg.eval_every > 0 && update % cfg.eval_every == 0) || update == cfg.total_updates;
    float eval_error = std::numeric_limits<float>::quiet_NaN();
    if (do_eval) {
      eval_error = trainer.evaluate();
      if (eval_error < result.best_eval_error) {
        result.best_eval_error = eval_error;
        best_params = trainer.flatParams();
      }
    }

    std::snprintf(row, sizeof(row), "%d,%.6g,%.6g,%d,%.6g,%.6g,%.6g,%.6g,%.6g,",
                  update, cstats.mean_episode_reward, cstats.mean_final_pos_error,
                  cstats.episodes_finished, stats.policy_loss, stats.value_loss,
                  stats.entropy, stats.clip_fraction, stats.approx_kl);
    csv += row;
    if (do_eval) {
      std::snprintf(row, sizeof(row), "%.6g", eval_error);
      csv += row;
    }
    csv += '\n';

    if (progress) progress(update, stats, cstats);

    if (cfg.target_eval_error > 0.0f && result.best_eval_error <= cfg.target_eval_error) {
      break;
    }
  }

  trainer.setFlatParams(best_params);
  result.policy = trainer.policy();
  result.critic = trainer.critic();
  result.curves_csv = std::move(csv);
  result.updates_run = std::min(update, cfg.total_updates);
  result.params_crc = trainer.paramsCrc();
  return result;
}

}  // namespace nnfc
