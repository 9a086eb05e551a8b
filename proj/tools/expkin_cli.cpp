// Command-line front end: compute kinematic/dynamic quantities for a robot,
// run the dof-scaling benchmark over both formulations, and simulate an
// impedance-controlled robot. All numeric output is %.12g.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "expkin/expkin.hpp"

namespace {

using namespace expkin;

std::vector<double> parse_numbers(const std::string& text, const std::string& what) {
  std::vector<double> values;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    try {
      std::size_t used = 0;
      const double v = std::stod(item, &used);
      while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) {
        ++used;
      }
      if (used != item.size()) {
        throw std::invalid_argument(item);
      }
      values.push_back(v);
    } catch (const std::exception&) {
      throw ValidationError(what + ": cannot parse '" + item + "' as a number");
    }
  }
  if (values.empty()) {
    throw ValidationError(what + ": empty list");
  }
  return values;
}

Eigen::VectorXd parse_vector(const std::string& text, const std::string& what) {
  const std::vector<double> values = parse_numbers(text, what);
  return Eigen::Map<const Eigen::VectorXd>(values.data(),
                                           static_cast<Eigen::Index>(values.size()));
}

Eigen::Vector3d parse_vec3(const std::string& text, const std::string& what) {
  const std::vector<double> values = parse_numbers(text, what);
  if (values.size() != 3) {
    throw ValidationError(what + ": expected 3 values, got " +
                          std::to_string(values.size()));
  }
  return {values[0], values[1], values[2]};
}

std::vector<int> parse_dof_list(const std::string& text) {
  std::vector<int> dofs;
  if (text.find(':') != std::string::npos) {
    int start = 0, stop = 0, step = 1;
    if (std::sscanf(text.c_str(), "%d:%d:%d", &start, &stop, &step) != 3 || step < 1) {
      throw ValidationError("--dof: range must be start:stop:step with step >= 1, got '" +
                            text + "'");
    }
    for (int d = start; d <= stop; d += step) {
      dofs.push_back(d);
    }
  } else {
    for (double v : parse_numbers(text, "--dof")) {
      dofs.push_back(static_cast<int>(v));
    }
  }
  if (dofs.empty()) {
    throw ValidationError("--dof: empty list");
  }
  for (int d : dofs) {
    if (d < 1) {
      throw ValidationError("--dof: values must be >= 1, got " + std::to_string(d));
    }
  }
  return dofs;
}

RobotModel build_robot(const std::string& robot, int dof) {
  if (robot == "snake") {
    if (dof < 1) {
      throw ValidationError("--dof: required (>= 1) for the snake robot");
    }
    return make_snake(dof, 1.0, 1.0);
  }
  if (robot == "cartpole") {
    return make_cartpole(1.0, 1.0, 1.0);
  }
  if (robot == "franka") {
    return make_franka();
  }
  return load_robot_file(robot);
}

void write_document(const std::string& out, const std::string& content) {
  if (out == "-") {
    std::cout << content;
    return;
  }
  std::ofstream file(out);
  if (!file) {
    throw ValidationError("cannot open output file: " + out);
  }
  file << content;
}

std::string matrix_csv(const Eigen::MatrixXd& m) {
  std::string out;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      out += detail::format_g12(m(r, c));
      out += c + 1 < m.cols() ? "," : "";
    }
    out += '\n';
  }
  return out;
}

struct ComputeOptions {
  std::string quantity;
  std::string robot;
  int dof = 0;
  std::string q_text;
  std::string qdot_text;
  int body_id = 0;
  std::string offset_text;
  std::string method = "poe";
  std::string out;
};

int run_compute(const ComputeOptions& opt) {
  const std::optional<Quantity> quantity = parse_quantity(opt.quantity);
  if (!quantity) {
    throw ValidationError("unknown quantity '" + opt.quantity + "'");
  }
  const std::optional<Method> method = parse_method(opt.method);
  if (!method) {
    throw ValidationError("unknown method '" + opt.method + "'");
  }
  const Eigen::VectorXd q = parse_vector(opt.q_text, "--q");
  const bool point_query = opt.body_id > 0 || !opt.offset_text.empty();
  if (point_query && *quantity != Quantity::Fk && *quantity != Quantity::HybridJacobian) {
    throw ValidationError("--body-id/--offset apply only to fk and jacobian");
  }

  Eigen::MatrixXd result;
  if (*method == Method::Dh) {
    if (opt.robot != "snake") {
      throw ValidationError("--method dh is only available for the snake robot");
    }
    if (point_query) {
      throw ValidationError("--body-id/--offset are not available with --method dh");
    }
    if (!supports(*quantity, Method::Dh)) {
      throw ValidationError(std::string(to_string(*quantity)) +
                            " is not available for the dh method");
    }
    if (opt.dof < 1) {
      throw ValidationError("--dof: required (>= 1) for the snake robot");
    }
    const DHModel dh = snake_to_dh(opt.dof, 1.0, 1.0);
    switch (*quantity) {
      case Quantity::Fk:
        result = dh_forward_kinematics(dh, q).matrix();
        break;
      case Quantity::HybridJacobian:
        result = dh_hybrid_jacobian(dh, q).matrix;
        break;
      default:
        result = dh_mass_matrix(dh, q);
        break;
    }
  } else {
    const RobotModel model = build_robot(opt.robot, opt.dof);
    const int body_id = opt.body_id > 0 ? opt.body_id : model.dof();
    const Eigen::Vector3d offset = opt.offset_text.empty()
                                       ? Eigen::Vector3d::Zero().eval()
                                       : parse_vec3(opt.offset_text, "--offset");
    const Eigen::VectorXd qdot = opt.qdot_text.empty()
                                     ? Eigen::VectorXd::Zero(model.dof()).eval()
                                     : parse_vector(opt.qdot_text, "--qdot");
    switch (*quantity) {
      case Quantity::Fk:
        result = forward_kinematics(model, q, body_id, offset).matrix();
        break;
      case Quantity::HybridJacobian:
        result = hybrid_jacobian(model, q, body_id, offset).matrix;
        break;
      case Quantity::Mass:
        result = mass_matrix(model, q);
        break;
      case Quantity::Gravity:
        result = gravity_vector(model, q).transpose();
        break;
      case Quantity::Coriolis:
        result = coriolis_matrix(model, q, qdot);
        break;
    }
  }
  write_document(opt.out, matrix_csv(result));
  return 0;
}

struct BenchmarkOptions {
  std::string quantities = "fk,jacobian,mass,gravity,coriolis";
  std::string methods = "poe,dh";
  std::string dof_text = "2:64:2";
  int reps = 100;
  int warmup = 10;
  std::string out;
  std::string svg;
};

int run_benchmark_cmd(const BenchmarkOptions& opt) {
  std::vector<Quantity> quantities;
  {
    std::stringstream stream(opt.quantities);
    std::string item;
    while (std::getline(stream, item, ',')) {
      if (item == "all") {
        quantities = {Quantity::Fk, Quantity::HybridJacobian, Quantity::Mass,
                      Quantity::Gravity, Quantity::Coriolis};
        break;
      }
      const std::optional<Quantity> q = parse_quantity(item);
      if (!q) {
        throw ValidationError("--quantity: unknown quantity '" + item + "'");
      }
      quantities.push_back(*q);
    }
  }
  std::vector<Method> methods;
  {
    std::stringstream stream(opt.methods);
    std::string item;
    while (std::getline(stream, item, ',')) {
      const std::optional<Method> m = parse_method(item);
      if (!m) {
        throw ValidationError("--methods: unknown method '" + item + "'");
      }
      methods.push_back(*m);
    }
  }
  if (quantities.empty() || methods.empty()) {
    throw ValidationError("--quantity/--methods: empty list");
  }
  const std::vector<int> dofs = parse_dof_list(opt.dof_text);

  std::vector<BenchResult> results;
  bool ran_any = false;
  for (Quantity quantity : quantities) {
    for (Method method : methods) {
      if (!supports(quantity, method)) {
        std::cerr << "note: skipping " << to_string(quantity) << "/"
                  << to_string(method) << " (not available)\n";
        continue;
      }
      const std::vector<BenchResult> batch =
          run_benchmark(quantity, method, dofs, opt.reps, opt.warmup);
      results.insert(results.end(), batch.begin(), batch.end());
      ran_any = true;
    }
  }
  if (!ran_any) {
    throw ValidationError("no runnable (quantity, method) combination was requested");
  }
  write_document(opt.out, emit_csv(results));
  if (!opt.svg.empty()) {
    write_document(opt.svg, emit_scaling_svg(results));
  }
  return 0;
}

struct SimulateOptions {
  std::string mode;
  std::string robot;
  int dof = 0;
  double duration = 10.0;
  double dt = 1e-3;
  double stiffness = 100.0;
  double damping = 20.0;
  std::string circle_text;
  std::string q0_text;
  std::string qdot0_text;
  int stride = 1;
  std::string integrator = "rk4";
  std::string out;
};

int run_simulate(const SimulateOptions& opt) {
  if (opt.mode != "impedance") {
    throw ValidationError("unknown simulation mode '" + opt.mode + "' (expected 'impedance')");
  }
  const RobotModel model = build_robot(opt.robot, opt.dof);
  const Eigen::VectorXd q0 = opt.q0_text.empty()
                                 ? Eigen::VectorXd::Zero(model.dof()).eval()
                                 : parse_vector(opt.q0_text, "--q0");
  const Eigen::VectorXd qdot0 = opt.qdot0_text.empty()
                                    ? Eigen::VectorXd::Zero(model.dof()).eval()
                                    : parse_vector(opt.qdot0_text, "--qdot0");

  SimConfig config;
  config.dt = opt.dt;
  config.duration = opt.duration;
  config.record_stride = opt.stride;
  if (opt.integrator == "rk4") {
    config.integrator = Integrator::Rk4;
  } else if (opt.integrator == "semi-implicit-euler") {
    config.integrator = Integrator::SemiImplicitEuler;
  } else {
    throw ValidationError("--integrator: expected rk4 or semi-implicit-euler");
  }

  const Eigen::Matrix3d stiffness = opt.stiffness * Eigen::Matrix3d::Identity();
  const Eigen::Matrix3d damping = opt.damping * Eigen::Matrix3d::Identity();

  std::optional<Eigen::Vector3d> center;
  double radius = 0.0, period = 1.0;
  if (!opt.circle_text.empty()) {
    const std::vector<double> c = parse_numbers(opt.circle_text, "--circle");
    if (c.size() != 5) {
      throw ValidationError("--circle: expected cx,cy,cz,r,period");
    }
    center = Eigen::Vector3d(c[0], c[1], c[2]);
    radius = c[3];
    period = c[4];
    if (!(period > 0.0)) {
      throw ValidationError("--circle: period must be positive");
    }
  }
  const Eigen::Vector3d hold = forward_kinematics(model, q0).translation;

  const Controller controller = [&](double t, const Eigen::VectorXd& q,
                                    const Eigen::VectorXd& qdot) {
    const Eigen::Vector3d target =
        center ? circular_target(*center, radius, period, t) : hold;
    return impedance_torque(model, q, qdot, target, stiffness, damping);
  };

  const Trajectory traj = simulate(model, controller, q0, qdot0, config);
  std::ostringstream csv;
  write_trajectory_csv(traj, csv);
  write_document(opt.out, csv.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Screw-theory robot modeling toolkit: exponential-map kinematics "
               "and dynamics with a DH baseline, simulation, and benchmarks"};
  app.require_subcommand(1);

  ComputeOptions compute;
  CLI::App* compute_cmd =
      app.add_subcommand("compute", "Evaluate a kinematic or dynamic quantity");
  compute_cmd->add_option("quantity", compute.quantity, "fk|jacobian|mass|gravity|coriolis")
      ->required();
  compute_cmd->add_option("--robot", compute.robot,
                          "snake|cartpole|franka|path/to/description.json")
      ->required();
  compute_cmd->add_option("--dof", compute.dof, "Degrees of freedom (snake only)");
  compute_cmd->add_option("--q", compute.q_text, "Joint positions v1,v2,...")->required();
  compute_cmd->add_option("--qdot", compute.qdot_text, "Joint rates v1,v2,...");
  compute_cmd->add_option("--body-id", compute.body_id, "Queried body (1-based, default: last)");
  compute_cmd->add_option("--offset", compute.offset_text, "Point offset x,y,z on the queried body");
  compute_cmd->add_option("--method", compute.method, "poe|dh (default poe)");
  compute_cmd->add_option("--out", compute.out, "Output path or - for stdout")->required();

  BenchmarkOptions bench;
  CLI::App* bench_cmd =
      app.add_subcommand("benchmark", "Time quantities across dof for both methods");
  bench_cmd->add_option("--quantity", bench.quantities,
                        "Comma list of fk|jacobian|mass|gravity|coriolis, or 'all'");
  bench_cmd->add_option("--methods", bench.methods, "Comma list of poe|dh");
  bench_cmd->add_option("--dof", bench.dof_text, "start:stop:step or comma list");
  bench_cmd->add_option("--reps", bench.reps, "Timed repetitions per point (>= 3)");
  bench_cmd->add_option("--warmup", bench.warmup, "Untimed warmup repetitions");
  bench_cmd->add_option("--out", bench.out, "CSV output path or -")->required();
  bench_cmd->add_option("--svg", bench.svg, "Optional SVG chart path");

  SimulateOptions sim;
  CLI::App* sim_cmd = app.add_subcommand("simulate", "Run a controlled simulation");
  sim_cmd->add_option("mode", sim.mode, "Simulation mode (impedance)")->required();
  sim_cmd->add_option("--robot", sim.robot, "snake|cartpole|franka|path/to/description.json")
      ->required();
  sim_cmd->add_option("--dof", sim.dof, "Degrees of freedom (snake only)");
  sim_cmd->add_option("--duration", sim.duration, "Simulated time in seconds");
  sim_cmd->add_option("--dt", sim.dt, "Fixed integration step in seconds");
  sim_cmd->add_option("--stiffness", sim.stiffness, "Task-space stiffness (isotropic, N/m)");
  sim_cmd->add_option("--damping", sim.damping, "Task-space damping (isotropic, N s/m)");
  sim_cmd->add_option("--circle", sim.circle_text,
                      "cx,cy,cz,r,period circular target (default: hold the start pose)");
  sim_cmd->add_option("--q0", sim.q0_text, "Initial joint positions (default zeros)");
  sim_cmd->add_option("--qdot0", sim.qdot0_text, "Initial joint rates (default zeros)");
  sim_cmd->add_option("--stride", sim.stride, "Record every N-th step");
  sim_cmd->add_option("--integrator", sim.integrator, "rk4|semi-implicit-euler");
  sim_cmd->add_option("--out", sim.out, "Trajectory CSV path or -")->required();

  try {
    app.parse(argc, argv);
    if (compute_cmd->parsed()) {
      return run_compute(compute);
    }
    if (bench_cmd->parsed()) {
      return run_benchmark_cmd(bench);
    }
    return run_simulate(sim);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
