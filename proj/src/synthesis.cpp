#include "jqc/synthesis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>
#include <utility>

namespace jqc {

namespace {

constexpr double kInitialBoxHalfWidth = 2.0;
constexpr double kRestartPerturbationStd = 0.1;

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 over seed + stream index: independent streams per restart.
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

ControlPath unpack_path(const Eigen::VectorXd& x, int qubits, int vertices) {
  ControlPath path;
  path.n = qubits;
  path.vertices.reserve(vertices);
  for (int v = 0; v < vertices; ++v)
    path.vertices.push_back(x.segment(2 * qubits * v, 2 * qubits));
  return path;
}

// Budget-capped objective wrapper shared by one restart; keeps the running
// best point and the per-evaluation trace.
struct RestartState {
  const SynthesisProblem& problem;
  Eigen::VectorXd best_x;
  double best_f = std::numeric_limits<double>::infinity();
  double current_dt = 1e-3;
  long evals = 0;
  std::vector<double> trace;

  explicit RestartState(const SynthesisProblem& p) : problem(p) {}

  double eval(const Eigen::VectorXd& x) {
    const double f =
        error_function(problem.target, unpack_path(x, problem.qubits, problem.vertices),
                       current_dt);
    ++evals;
    trace.push_back(f);
    if (f < best_f) {
      best_f = f;
      best_x = x;
    }
    return f;
  }
};

// One Nelder-Mead run over an existing simplex, stopping when the stage
// evaluation budget is exhausted, the simplex has collapsed, or progress has
// stalled. Returns the number of evaluations spent.
// Standard coefficients: reflection 1, expansion 2, contraction 1/2, shrink 1/2.
long nelder_mead_stage(RestartState& state, std::vector<Eigen::VectorXd>& simplex,
                       std::vector<double>& values, long stage_budget) {
  const auto dim = static_cast<size_t>(simplex[0].size());
  long used = 0;
  double local_best = std::numeric_limits<double>::infinity();
  // Progress watchdog for high-dimensional searches, where simplex shape
  // adaptation is too slow to ride out: if a full window of evaluations
  // improves the best value by less than 2%, hand control back so the caller
  // rebuilds the simplex around the incumbent. Low-dimensional searches make
  // steady progress on their own and are left to run uninterrupted.
  const bool watchdog = dim >= 32;
  const long window = 50 * static_cast<long>(dim);
  long next_check = window;
  double window_start_best = std::numeric_limits<double>::infinity();
  const auto budget_left = [&] { return stage_budget - used; };
  const auto eval = [&](const Eigen::VectorXd& x) {
    ++used;
    const double f = state.eval(x);
    local_best = std::min(local_best, f);
    return f;
  };

  // (Re-)evaluate the simplex under the current objective.
  for (size_t i = 0; i < simplex.size(); ++i) {
    if (budget_left() <= 0) return used;
    values[i] = eval(simplex[i]);
  }

  std::vector<size_t> order(simplex.size());
  while (budget_left() > 0) {
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return values[a] < values[b]; });
    const size_t best = order.front();
    const size_t worst = order.back();
    const size_t second_worst = order[order.size() - 2];

    double spread = 0.0;
    for (size_t i = 0; i < simplex.size(); ++i)
      spread = std::max(spread, (simplex[i] - simplex[best]).cwiseAbs().maxCoeff());
    if (spread < 1e-12 ||
        values[worst] - values[best] < 1e-15 * std::max(1.0, values[best]))
      return used;
    if (watchdog && used >= next_check) {
      if (local_best > 0.98 * window_start_best) return used;
      window_start_best = local_best;
      next_check = used + window;
    }

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(dim);
    for (size_t i = 0; i < simplex.size(); ++i)
      if (i != worst) centroid += simplex[i];
    centroid /= static_cast<double>(simplex.size() - 1);

    const Eigen::VectorXd reflected = centroid + (centroid - simplex[worst]);
    const double fr = eval(reflected);
    if (fr < values[best]) {
      if (budget_left() <= 0) {
        simplex[worst] = reflected;
        values[worst] = fr;
        return used;
      }
      const Eigen::VectorXd expanded = centroid + 2.0 * (centroid - simplex[worst]);
      const double fe = eval(expanded);
      if (fe < fr) {
        simplex[worst] = expanded;
        values[worst] = fe;
      } else {
        simplex[worst] = reflected;
        values[worst] = fr;
      }
      continue;
    }
    if (fr < values[second_worst]) {
      simplex[worst] = reflected;
      values[worst] = fr;
      continue;
    }
    if (budget_left() <= 0) return used;
    if (fr < values[worst]) {
      const Eigen::VectorXd contracted = centroid + 0.5 * (reflected - centroid);
      const double fc = eval(contracted);
      if (fc <= fr) {
        simplex[worst] = contracted;
        values[worst] = fc;
        continue;
      }
    } else {
      const Eigen::VectorXd contracted = centroid + 0.5 * (simplex[worst] - centroid);
      const double fc = eval(contracted);
      if (fc < values[worst]) {
        simplex[worst] = contracted;
        values[worst] = fc;
        continue;
      }
    }
    // Shrink toward the best vertex.
    for (size_t i = 0; i < simplex.size(); ++i) {
      if (i == best) continue;
      simplex[i] = simplex[best] + 0.5 * (simplex[i] - simplex[best]);
      if (budget_left() <= 0) return used;
      values[i] = eval(simplex[i]);
    }
  }
  return used;
}

std::vector<Eigen::VectorXd> jittered_simplex(const Eigen::VectorXd& center,
                                              double std_dev, std::mt19937_64& rng) {
  std::normal_distribution<double> jitter(0.0, std_dev);
  const auto dim = center.size();
  std::vector<Eigen::VectorXd> simplex;
  simplex.reserve(dim + 1);
  simplex.push_back(center);
  for (Eigen::Index i = 0; i < dim; ++i) {
    Eigen::VectorXd p = center;
    for (Eigen::Index d = 0; d < dim; ++d) p(d) += jitter(rng);
    simplex.push_back(std::move(p));
  }
  return simplex;
}

// Coordinate-axis simplex around a center point; rebuilding with this shape
// after a collapse restores full-rank search directions cheaply.
std::vector<Eigen::VectorXd> axis_simplex(const Eigen::VectorXd& center, double step) {
  const auto dim = center.size();
  std::vector<Eigen::VectorXd> simplex;
  simplex.reserve(dim + 1);
  simplex.push_back(center);
  for (Eigen::Index i = 0; i < dim; ++i) {
    Eigen::VectorXd p = center;
    p(i) += step;
    simplex.push_back(std::move(p));
  }
  return simplex;
}

// Runs one restart through the whole dt schedule; returns the restart state.
RestartState run_restart(const SynthesisProblem& problem, int restart_index,
                         const Eigen::VectorXd* incumbent) {
  const int dim = 2 * problem.qubits * problem.vertices;
  RestartState state(problem);
  std::mt19937_64 rng(mix_seed(problem.seed, static_cast<std::uint64_t>(restart_index)));

  std::vector<Eigen::VectorXd> simplex;
  simplex.reserve(dim + 1);
  if (incumbent == nullptr) {
    std::uniform_real_distribution<double> box(-kInitialBoxHalfWidth, kInitialBoxHalfWidth);
    for (int i = 0; i <= dim; ++i) {
      Eigen::VectorXd p(dim);
      for (int d = 0; d < dim; ++d) p(d) = box(rng);
      simplex.push_back(std::move(p));
    }
  } else {
    simplex = jittered_simplex(*incumbent, kRestartPerturbationStd, rng);
  }
  std::vector<double> values(simplex.size(), std::numeric_limits<double>::infinity());

  // High-dimensional searches descend far faster from rebuilt axis simplices
  // than from the broad initial one, so the initial simplex gets a bounded
  // share of the first stage before the rebuild ladder takes over.
  const bool bound_initial_phase = dim >= 32;
  bool first_stage = true;
  for (const ScheduleStage& stage : problem.schedule) {
    state.current_dt = stage.dt;
    state.best_f = std::numeric_limits<double>::infinity();  // not comparable across dt
    const long stage_budget = std::max<long>(1, stage.max_evals / problem.restarts);
    const long first_run_budget =
        (first_stage && bound_initial_phase)
            ? std::min<long>(stage_budget, 75 * static_cast<long>(dim))
            : stage_budget;
    first_stage = false;
    long used = nelder_mead_stage(state, simplex, values, first_run_budget);
    // A collapsed or sluggish simplex with budget to spare resumes from the
    // stage's best point with fresh axis-aligned directions. The edge length
    // tightens on every unproductive rebuild and resets after a clear gain.
    double rebuild_step = 0.1;
    while (used < stage_budget) {
      simplex = axis_simplex(state.best_x, rebuild_step);
      values.assign(simplex.size(), std::numeric_limits<double>::infinity());
      const double before = state.best_f;
      used += nelder_mead_stage(state, simplex, values, stage_budget - used);
      if (state.best_f >= 0.98 * before)
        rebuild_step = std::max(rebuild_step * 0.3, 1e-7);
    }
  }
  return state;
}

}  // namespace

SynthesisProblem SynthesisProblem::for_target(const Eigen::MatrixXcd& target, int vertices,
                                              long budget, int restarts,
                                              std::uint64_t seed, double tolerance) {
  SynthesisProblem p;
  p.target = target;
  p.qubits = 0;
  for (Eigen::Index d = target.rows(); d > 1; d /= 2) ++p.qubits;
  p.vertices = vertices;
  const long coarse = static_cast<long>(0.4 * static_cast<double>(budget));
  p.schedule = {{0.05, coarse}, {0.01, coarse}, {1e-3, budget - 2 * coarse}};
  p.restarts = restarts;
  p.seed = seed;
  p.tolerance = tolerance;
  return p;
}

void SynthesisProblem::validate() const {
  if (qubits < 1 || qubits > 3)
    throw std::invalid_argument("SynthesisProblem: qubits must be 1..3");
  const Eigen::Index dim = Eigen::Index(1) << qubits;
  if (target.rows() != dim || target.cols() != dim)
    throw std::invalid_argument("SynthesisProblem: target dimension must be 2^qubits");
  if (unitarity_defect(target) > 1e-8)
    throw std::invalid_argument("SynthesisProblem: target must be unitary");
  if (std::abs(target.determinant() - complexd(1, 0)) > 1e-6)
    throw std::invalid_argument("SynthesisProblem: target must have unit determinant");
  if (vertices < min_vertices(qubits))
    throw std::invalid_argument("SynthesisProblem: too few vertices for the target size");
  if (schedule.empty())
    throw std::invalid_argument("SynthesisProblem: empty schedule");
  long total = 0;
  double prev_dt = std::numeric_limits<double>::infinity();
  for (const auto& stage : schedule) {
    if (!(stage.dt > 0.0) || stage.dt > 1.0)
      throw std::invalid_argument("SynthesisProblem: stage dt must be in (0, 1]");
    if (stage.dt > prev_dt)
      throw std::invalid_argument("SynthesisProblem: stage dt must not increase");
    prev_dt = stage.dt;
    if (stage.max_evals < 0) throw std::invalid_argument("SynthesisProblem: negative budget");
    total += stage.max_evals;
  }
  if (total < 1) throw std::invalid_argument("SynthesisProblem: zero total budget");
  if (restarts < 1) throw std::invalid_argument("SynthesisProblem: restarts must be >= 1");
  if (tolerance < 0.0) throw std::invalid_argument("SynthesisProblem: negative tolerance");
  if (max_workers < 1) throw std::invalid_argument("SynthesisProblem: max_workers must be >= 1");
}

double error_function(const Eigen::MatrixXcd& target, const ControlPath& path, double dt) {
  PropagationSettings settings;
  settings.dt = dt;
  settings.method = StepMethod::taylor;
  return frobenius_distance(target, propagate(path, settings));
}

int min_vertices(int k) {
  if (k < 1) throw std::invalid_argument("min_vertices: k must be >= 1");
  const long params_needed = (1L << (2 * k)) - 1;
  return static_cast<int>((params_needed + 2 * k - 1) / (2 * k));
}

SynthesisResult minimize(const SynthesisProblem& problem) {
  problem.validate();

  // Restart 0 explores from scratch; later restarts refine its outcome and are
  // independent of each other, so any of them could run concurrently.
  RestartState first = run_restart(problem, 0, nullptr);

  SynthesisResult result;
  result.path = unpack_path(first.best_x, problem.qubits, problem.vertices);
  result.error = first.best_f;
  result.evals = first.evals;
  result.trace = std::move(first.trace);

  if (!(result.error <= problem.tolerance)) {
    const Eigen::VectorXd incumbent = first.best_x;
    for (int r = 1; r < problem.restarts; ++r) {
      RestartState candidate = run_restart(problem, r, &incumbent);
      result.evals += candidate.evals;
      result.trace.insert(result.trace.end(), candidate.trace.begin(),
                          candidate.trace.end());
      if (candidate.best_f < result.error) {
        result.error = candidate.best_f;
        result.path = unpack_path(candidate.best_x, problem.qubits, problem.vertices);
      }
    }
  }

  // The trace reports the running best across the whole search.
  double running = std::numeric_limits<double>::infinity();
  for (double& v : result.trace) {
    running = std::min(running, v);
    v = running;
  }
  // The reported error is always measured at the schedule's finest step.
  result.error = error_function(problem.target, result.path, problem.schedule.back().dt);
  result.converged = result.error <= problem.tolerance;
  return result;
}

ZxzAngles single_qubit_zxz(const Eigen::Matrix2cd& u) {
  if (unitarity_defect(u) > 1e-8)
    throw std::invalid_argument("single_qubit_zxz: input must be unitary");
  if (std::abs(u.determinant() - complexd(1, 0)) > 1e-8)
    throw std::invalid_argument("single_qubit_zxz: input must have unit determinant");

  const complexd a = u(0, 0);
  const complexd b = u(0, 1);
  // u = [[cos(x/2) e^{i(z1+z2)/2}, i sin(x/2) e^{i(z2-z1)/2}],
  //      [i sin(x/2) e^{i(z1-z2)/2}, cos(x/2) e^{-i(z1+z2)/2}]]
  const double x = 2.0 * std::atan2(std::abs(b), std::abs(a));
  constexpr double eps = 1e-12;
  const double sum = (std::abs(a) > eps) ? 2.0 * std::arg(a) : 0.0;
  const double diff =
      (std::abs(b) > eps) ? 2.0 * (std::arg(b) - std::numbers::pi / 2.0) : 0.0;

  const auto wrap = [](double t) {
    const double period = 4.0 * std::numbers::pi;
    double w = std::fmod(t, period);
    if (w < -2.0 * std::numbers::pi) w += period;
    if (w >= 2.0 * std::numbers::pi) w -= period;
    return w;
  };
  return {wrap(0.5 * (sum - diff)), wrap(x), wrap(0.5 * (sum + diff))};
}

ControlPath pulse_integrals_to_path(const ZxzAngles& angles, int pulses_per_integral) {
  if (pulses_per_integral < 1)
    throw std::invalid_argument("pulse_integrals_to_path: need at least one pulse");
  ControlPath path;
  path.n = 1;
  // Time order: z1 pulse, then x, then z2 (rightmost factor acts first).
  const std::array<std::pair<int, double>, 3> pulses = {
      std::pair<int, double>{0, angles.z1}, {1, angles.x}, {0, angles.z2}};
  bool first = true;
  for (const auto& [axis, integral] : pulses) {
    if (std::abs(integral) < 1e-15) continue;
    const double peak = integral / pulses_per_integral;
    for (int p = 0; p < pulses_per_integral; ++p) {
      if (!first) path.vertices.push_back(Eigen::Vector2d::Zero());
      Eigen::Vector2d v = Eigen::Vector2d::Zero();
      v(axis) = peak;
      path.vertices.push_back(v);
      first = false;
    }
  }
  return path;
}

NoiseRobustness noise_robustness(const ControlPath& path, const Eigen::MatrixXcd& target,
                                 const std::vector<double>& levels, int trials,
                                 std::uint64_t seed, double dt) {
  path.validate();
  if (trials < 1) throw std::invalid_argument("noise_robustness: trials must be >= 1");
  for (double level : levels)
    if (!(level >= 0.0)) throw std::invalid_argument("noise_robustness: negative rms level");

  NoiseRobustness report;
  report.levels = levels;
  report.base_error = error_function(target, path, dt);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> unit_noise(0.0, 1.0);
  for (double level : levels) {
    double sum = 0.0;
    for (int t = 0; t < trials; ++t) {
      ControlPath noisy = path;
      if (level > 0.0) {
        for (auto& v : noisy.vertices)
          for (Eigen::Index d = 0; d < v.size(); ++d) v(d) += level * unit_noise(rng);
      }
      sum += error_function(target, noisy, dt);
    }
    report.mean_errors.push_back(sum / trials);
  }

  double sxy = 0.0, sxx = 0.0;
  for (size_t i = 0; i < levels.size(); ++i) {
    sxy += levels[i] * report.mean_errors[i];
    sxx += levels[i] * levels[i];
  }
  report.slope = (sxx > 0.0) ? sxy / sxx : 0.0;

  if (!report.mean_errors.empty()) {
    const double mean =
        std::accumulate(report.mean_errors.begin(), report.mean_errors.end(), 0.0) /
        static_cast<double>(report.mean_errors.size());
    double ss_res = 0.0, ss_tot = 0.0;
    for (size_t i = 0; i < levels.size(); ++i) {
      const double resid = report.mean_errors[i] - report.slope * levels[i];
      ss_res += resid * resid;
      ss_tot += (report.mean_errors[i] - mean) * (report.mean_errors[i] - mean);
    }
    report.r_squared = (ss_tot > 0.0) ? 1.0 - ss_res / ss_tot : 1.0;
  }
  return report;
}

}  // namespace jqc
