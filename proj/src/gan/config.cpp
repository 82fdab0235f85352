#include "discgan/gan/config.hpp"

#include <cmath>

#include "discgan/errors.hpp"

namespace discgan::dist {

std::string_view to_string(Scope scope) {
  switch (scope) {
    case Scope::none: return "none";
    case Scope::discriminator: return "discriminator";
    case Scope::generator: return "generator";
    case Scope::both: return "both";
  }
  return "none";
}

Scope scope_from_string(std::string_view s) {
  for (Scope sc : {Scope::none, Scope::discriminator, Scope::generator, Scope::both}) {
    if (to_string(sc) == s) return sc;
  }
  throw ConfigError("distribution.scope: unknown value '" + std::string(s) +
                    "' (expected none, discriminator, generator or both)");
}

}  // namespace discgan::dist

namespace discgan::gan {

namespace {

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw ConfigError(field + ": " + what);
}

void validate_adam(const nn::AdamConfig& a, const std::string& field) {
  require(a.lr > 0.0 && std::isfinite(a.lr), field + ".lr", "must be positive");
  require(a.beta1 >= 0.0 && a.beta1 < 1.0, field + ".beta1", "must be in [0,1)");
  require(a.beta2 >= 0.0 && a.beta2 < 1.0, field + ".beta2", "must be in [0,1)");
  require(a.epsilon > 0.0, field + ".epsilon", "must be positive");
}

nlohmann::json adam_json(const nn::AdamConfig& a) {
  return {{"lr", a.lr}, {"beta1", a.beta1}, {"beta2", a.beta2}, {"epsilon", a.epsilon}};
}

template <typename T>
void read(const nlohmann::json& j, const char* key, T& out, const std::string& field) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(field + ": wrong type");
  }
}

nn::AdamConfig read_adam(const nlohmann::json& j, nn::AdamConfig a, const std::string& field) {
  if (!j.is_object()) throw ConfigError(field + ": must be an object");
  read(j, "lr", a.lr, field + ".lr");
  read(j, "beta1", a.beta1, field + ".beta1");
  read(j, "beta2", a.beta2, field + ".beta2");
  read(j, "epsilon", a.epsilon, field + ".epsilon");
  return a;
}

}  // namespace

std::string_view to_string(Preset p) {
  switch (p) {
    case Preset::gan1d: return "gan1d";
    case Preset::cgan2d: return "cgan2d";
    case Preset::discgan: return "discgan";
  }
  return "discgan";
}

Preset preset_from_string(std::string_view s) {
  for (Preset p : {Preset::gan1d, Preset::cgan2d, Preset::discgan}) {
    if (to_string(p) == s) return p;
  }
  throw ConfigError("preset: unknown value '" + std::string(s) + "' (expected gan1d, cgan2d or discgan)");
}

void GanConfig::validate() const {
  require(noise_dim >= 1, "noise_dim", "must be at least 1");
  require(batch_size >= 1, "batch_size", "must be at least 1");
  require(preset != Preset::discgan || batch_size >= 2, "batch_size", "must be at least 2 with batch normalization");
  require(steps >= 1, "steps", "must be at least 1");
  require(eval_every >= 1, "eval_every", "must be at least 1");
  require(hidden_width >= 1, "hidden_width", "must be at least 1");
  require(leaky_alpha > 0.0, "leaky_alpha", "must be positive");
  require(dropout >= 0.0 && dropout < 1.0, "dropout", "must be in [0,1)");
  validate_adam(generator_optimizer, "optimizer.generator");
  validate_adam(discriminator_optimizer, "optimizer.discriminator");
  require(distribution.workers >= 1, "distribution.workers", "must be at least 1");
  const int lanes = distribution.lanes();
  require(batch_size >= lanes, "distribution.workers", "cannot exceed batch_size");
  require(!(preset == Preset::discgan && distribution.distributes_generator() && batch_size / lanes < 2),
          "distribution.workers", "leaves generator shards with fewer than 2 rows for batch normalization");
}

nlohmann::json GanConfig::to_json() const {
  nlohmann::json j = {{"preset", std::string(gan::to_string(preset))},
                      {"noise_dim", noise_dim},
                      {"batch_size", batch_size},
                      {"steps", steps},
                      {"seed", seed},
                      {"eval_every", eval_every},
                      {"hidden_width", hidden_width},
                      {"leaky_alpha", leaky_alpha},
                      {"dropout", dropout},
                      {"optimizer",
                       {{"generator", adam_json(generator_optimizer)},
                        {"discriminator", adam_json(discriminator_optimizer)}}},
                      {"distribution",
                       {{"workers", distribution.workers},
                        {"scope", std::string(dist::to_string(distribution.scope))},
                        {"sync_batch_norm", distribution.sync_batch_norm}}}};
  j["balance_on"] = balance_on ? nlohmann::json(*balance_on) : nlohmann::json(nullptr);
  return j;
}

GanConfig GanConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config: must be a JSON object");
  GanConfig c;
  if (j.contains("preset")) {
    if (!j["preset"].is_string()) throw ConfigError("preset: must be a string");
    c.preset = preset_from_string(j["preset"].get<std::string>());
  }
  read(j, "noise_dim", c.noise_dim, "noise_dim");
  read(j, "batch_size", c.batch_size, "batch_size");
  read(j, "steps", c.steps, "steps");
  read(j, "seed", c.seed, "seed");
  read(j, "eval_every", c.eval_every, "eval_every");
  read(j, "hidden_width", c.hidden_width, "hidden_width");
  read(j, "leaky_alpha", c.leaky_alpha, "leaky_alpha");
  read(j, "dropout", c.dropout, "dropout");
  if (j.contains("optimizer")) {
    const auto& o = j["optimizer"];
    if (!o.is_object()) throw ConfigError("optimizer: must be an object");
    if (o.contains("generator")) c.generator_optimizer = read_adam(o["generator"], c.generator_optimizer, "optimizer.generator");
    if (o.contains("discriminator")) {
      c.discriminator_optimizer = read_adam(o["discriminator"], c.discriminator_optimizer, "optimizer.discriminator");
    }
  }
  if (j.contains("distribution")) {
    const auto& d = j["distribution"];
    if (!d.is_object()) throw ConfigError("distribution: must be an object");
    read(d, "workers", c.distribution.workers, "distribution.workers");
    if (d.contains("scope")) {
      if (!d["scope"].is_string()) throw ConfigError("distribution.scope: must be a string");
      c.distribution.scope = dist::scope_from_string(d["scope"].get<std::string>());
    }
    read(d, "sync_batch_norm", c.distribution.sync_batch_norm, "distribution.sync_batch_norm");
  }
  if (j.contains("balance_on") && !j["balance_on"].is_null()) {
    if (!j["balance_on"].is_string()) throw ConfigError("balance_on: must be a string or null");
    c.balance_on = j["balance_on"].get<std::string>();
  }
  c.validate();
  return c;
}

}  // namespace discgan::gan
