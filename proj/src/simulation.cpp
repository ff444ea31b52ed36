#include "anematic/simulation.hpp"

#include <cmath>
#include <sstream>

namespace anematic {

namespace {

double distance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace

Model::Model(const Grid& g, int modes, const VectorExpr& boundary_velocity, const std::vector<double>& boundary_density,
             const std::vector<QTensor>& boundary_q, RheologyLaw viscosity, PressureLaw eos)
    : grid(g),
      basis(g, modes),
      u_b(boundary_velocity),
      boundary(decompose_boundary(g, [&boundary_velocity](const Vec3& x) { return boundary_velocity.value(x); })),
      rho_b(boundary_density),
      q_b(QBC::dirichlet(boundary_q)),
      u_b_nodes(sample_field<Vec3>(g, [&boundary_velocity](const Vec3& x) { return boundary_velocity.value(x); })),
      law(std::move(viscosity)),
      pressure(std::move(eos)) {
  if (rho_b.size() != g.boundary_size() || boundary_q.size() != g.boundary_size())
    throw ShapeError("model: boundary data must have one value per boundary face");
}

FlowFields velocity_fields(const Model& model, const std::vector<double>& v, const State& state) {
  return {state.rho, synthesize(model.basis, v, model.u_b), synthesize_gradient(model.basis, v, model.u_b), state.c,
          state.q};
}

PicardImage picard_image(const Model& model, const State& state, const std::vector<double>& guess) {
  PicardImage out;
  out.faces = synthesize_faces(model.basis, guess, model.u_b);
  VectorField u = synthesize(model.basis, guess, model.u_b);
  MatField grad_u = synthesize_gradient(model.basis, guess, model.u_b);

  auto cont = step_continuity(model.continuity, model.boundary, model.rho_b, state.rho, out.faces);
  ScalarField c = step_concentration(model.nematic, state.c, u);
  QField q = step_q(model.nematic, state.q, c, u, grad_u, model.q_b);
  out.flux = cont.flux;
  out.fields = FlowFields{std::move(cont.rho), std::move(u), std::move(grad_u), std::move(c), std::move(q)};

  out.stresses = assemble_stresses(model.momentum, model.law, model.pressure, out.fields, model.q_b);
  out.rhs = galerkin_rhs(model.basis, out.stresses, out.fields, model.momentum.epsilon);
  out.v = step_momentum(model.momentum, model.basis, model.u_b_nodes, state.rho, state.v, out.fields.rho, out.rhs);
  return out;
}

StepReport advance(const Model& model, State& state) {
  const PicardConfig& pc = model.picard;
  if (pc.tolerance <= 0.0) throw ConfigError("picard tolerance must be positive");
  std::vector<double> guess = state.v;
  const bool one = state.v_prev.size() == state.v.size();
  const bool two = one && state.v_prev2.size() == state.v.size();
  if (pc.extrapolate && two) {
    for (std::size_t i = 0; i < guess.size(); ++i)
      guess[i] = 3.0 * state.v[i] - 3.0 * state.v_prev[i] + state.v_prev2[i];
  } else if (pc.extrapolate && one) {
    for (std::size_t i = 0; i < guess.size(); ++i) guess[i] = 2.0 * state.v[i] - state.v_prev[i];
  }

  StepReport report;
  for (int it = 1; it <= pc.max_iterations; ++it) {
    PicardImage image = picard_image(model, state, guess);
    const double incr = distance(image.v, guess);
    report.increments.push_back(incr);
    if (!std::isfinite(incr)) {
      std::ostringstream msg;
      msg << "step " << state.step + 1 << ": fixed-point iterate is not finite";
      throw ConvergenceError(msg.str());
    }
    if (incr <= pc.tolerance) {
      report.iterations = it;
      report.flux = image.flux;
      report.faces = std::move(image.faces);
      report.stresses = std::move(image.stresses);
      report.rhs = std::move(image.rhs);
      state.v_prev2 = std::move(state.v_prev);
      state.v_prev = state.v;
      state.v = std::move(image.v);
      state.rho = image.fields.rho;
      state.c = image.fields.c;
      state.q = image.fields.q;
      report.iterate = std::move(image.fields);
      ++state.step;
      state.time = static_cast<double>(state.step) * model.dt();
      return report;
    }
    for (std::size_t i = 0; i < guess.size(); ++i)
      guess[i] = pc.damping * image.v[i] + (1.0 - pc.damping) * guess[i];
  }
  std::ostringstream msg;
  msg << "step " << state.step + 1 << ": fixed-point iteration did not converge in " << pc.max_iterations
      << " iterations, last increment " << report.increments.back();
  throw ConvergenceError(msg.str());
}

}  // namespace anematic
