#pragma once

#include <functional>

#include "eis/game.hpp"

namespace eis {

/// Learned pair f = (V, pi): a value estimate and an action distribution per
/// state. Implementations keep |value(s)| within the game's value bound and
/// return valid distributions. A model must be immutable while any
/// improvement query against it is in flight.
class Model {
 public:
  virtual ~Model() = default;
  virtual double value(const GameState& s) const = 0;
  virtual Distribution policy(const GameState& s) const = 0;
};

/// V == constant, pi == uniform. The iteration-zero model.
class ConstantModel final : public Model {
 public:
  ConstantModel(double value, std::size_t action_count)
      : value_(value), action_count_(action_count) {}

  double value(const GameState&) const override { return value_; }
  Distribution policy(const GameState&) const override {
    return Distribution::uniform(action_count_);
  }

 private:
  double value_;
  std::size_t action_count_;
};

/// Wraps a callable value function; uniform policy. Test fixtures use this
/// to plug exact or deliberately biased leaf evaluators into searches.
class FunctionModel final : public Model {
 public:
  FunctionModel(std::function<double(const GameState&)> value, std::size_t action_count)
      : value_(std::move(value)), action_count_(action_count) {}

  double value(const GameState& s) const override { return value_(s); }
  Distribution policy(const GameState&) const override {
    return Distribution::uniform(action_count_);
  }

 private:
  std::function<double(const GameState&)> value_;
  std::size_t action_count_;
};

}  // namespace eis
