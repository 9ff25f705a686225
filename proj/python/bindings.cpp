// Python bindings for the core operations: bounded episodic memories, the
// MFEC agent loop, environments, the experiment harness and the stream study.
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "ecmem/agent.hpp"
#include "ecmem/analysis.hpp"
#include "ecmem/env.hpp"
#include "ecmem/errors.hpp"
#include "ecmem/harness.hpp"
#include "ecmem/memory.hpp"

namespace py = pybind11;
using namespace ecmem;

namespace {

const char* insert_kind_name(InsertKind kind) {
  switch (kind) {
    case InsertKind::Appended: return "appended";
    case InsertKind::UpdatedExactMatch: return "updated_exact_match";
    case InsertKind::Replaced: return "replaced";
    case InsertKind::Merged: return "merged";
    case InsertKind::ReplacedDeadCluster: return "replaced_dead_cluster";
  }
  return "?";
}

}  // namespace

PYBIND11_MODULE(_ecmem, m) {
  m.doc() = "Bounded episodic-control memories for reinforcement learning";

  py::register_exception<ConfigError>(m, "ConfigError");

  py::enum_<Strategy>(m, "Strategy")
      .value("LRU", Strategy::Lru)
      .value("REW", Strategy::Rew)
      .value("SUR", Strategy::Sur)
      .value("KM", Strategy::Km)
      .value("DKM", Strategy::Dkm);

  py::enum_<Backend>(m, "Backend")
      .value("NAIVE_SCAN", Backend::NaiveScan)
      .value("SPATIAL_TREE", Backend::SpatialTree);

  py::class_<KernelParams>(m, "KernelParams")
      .def(py::init([](double delta, int k) {
             return KernelParams{delta, k};
           }),
           py::arg("delta") = 1e-3, py::arg("k") = 11)
      .def_readwrite("delta", &KernelParams::delta)
      .def_readwrite("k", &KernelParams::k);

  m.def("kernel_weight",
        [](const std::vector<double>& a, const std::vector<double>& b,
           double delta) { return kernel_weight(a, b, delta); },
        py::arg("a"), py::arg("b"), py::arg("delta") = 1e-3);

  py::class_<ActionMemory>(m, "ActionMemory")
      .def(py::init([](std::size_t capacity, std::size_t key_dim,
                       Strategy strategy, Backend backend, KernelParams kernel,
                       std::optional<double> dkm_decrement) {
             ActionMemory::Options o;
             o.capacity = capacity;
             o.key_dim = key_dim;
             o.strategy = strategy;
             o.backend = backend;
             o.kernel = kernel;
             o.dkm_decrement = dkm_decrement;
             return ActionMemory(o);
           }),
           py::arg("capacity"), py::arg("key_dim"),
           py::arg("strategy") = Strategy::Lru,
           py::arg("backend") = Backend::SpatialTree,
           py::arg("kernel") = KernelParams{},
           py::arg("dkm_decrement") = std::nullopt)
      .def("__len__", &ActionMemory::size)
      .def_property_readonly("capacity", &ActionMemory::capacity)
      .def_property_readonly("key_dim", &ActionMemory::key_dim)
      .def_property_readonly("strategy", &ActionMemory::strategy)
      .def("insert",
           [](ActionMemory& mem, const std::vector<double>& key, double value,
              std::uint64_t now) {
             const auto effect = mem.insert(key, value, now);
             return py::make_tuple(insert_kind_name(effect.kind), effect.index);
           },
           py::arg("key"), py::arg("value"), py::arg("now"))
      .def("estimate",
           [](ActionMemory& mem, const std::vector<double>& query,
              std::optional<std::uint64_t> now) {
             if (now) return mem.estimate(query, *now);
             return std::as_const(mem).estimate(query);
           },
           py::arg("query"), py::arg("now") = std::nullopt,
           "Kernel-weighted k-NN estimate; passing `now` stamps the "
           "retrieved entries (training mode)")
      .def("knn",
           [](const ActionMemory& mem, const std::vector<double>& query, int k) {
             std::vector<std::pair<std::uint32_t, double>> out;
             for (const Neighbor& n : mem.knn(query, k))
               out.emplace_back(n.index, n.d2);
             return out;
           },
           py::arg("query"), py::arg("k"))
      .def("key",
           [](const ActionMemory& mem, std::size_t slot) {
             const auto k = mem.key(slot);
             return std::vector<double>(k.begin(), k.end());
           })
      .def("q", &ActionMemory::q)
      .def("surprise", &ActionMemory::surprise)
      .def("count", &ActionMemory::count)
      .def("last_used", &ActionMemory::last_used)
      .def("select_victim", &ActionMemory::select_victim)
      .def("total_count", &ActionMemory::total_count);

  py::class_<EpsilonSchedule>(m, "EpsilonSchedule")
      .def(py::init([](double initial, double final_value,
                       std::uint64_t anneal_start, std::uint64_t anneal_end) {
             return EpsilonSchedule{initial, final_value, anneal_start,
                                    anneal_end};
           }),
           py::arg("initial") = 1.0, py::arg("final") = 5e-3,
           py::arg("anneal_start") = 5000, py::arg("anneal_end") = 25000)
      .def("at", &EpsilonSchedule::at);

  m.def("episode_returns",
        [](const std::vector<double>& rewards, double discount) {
          return episode_returns(rewards, discount);
        },
        py::arg("rewards"), py::arg("discount"));

  py::class_<GaussianProjection>(m, "GaussianProjection")
      .def(py::init<std::size_t, std::size_t, std::uint64_t>(),
           py::arg("input_dim"), py::arg("output_dim"), py::arg("seed"))
      .def("apply",
           [](const GaussianProjection& p, const std::vector<double>& obs) {
             return p.apply(obs);
           });

  py::class_<Env>(m, "Env")
      .def("seed", &Env::seed)
      .def("reset", &Env::reset)
      .def("step",
           [](Env& env, int action) {
             const StepResult r = env.step(action);
             return py::make_tuple(r.observation, r.reward, r.done, r.truncated);
           })
      .def_property_readonly("num_actions", &Env::num_actions)
      .def_property_readonly("obs_dim", &Env::obs_dim)
      .def_property_readonly("default_action_repeat",
                             &Env::default_action_repeat)
      .def_property_readonly("name", [](const Env& e) {
        return std::string(e.name());
      });

  m.def("make_env", &make_env, py::arg("name"));

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_readwrite("env", &ExperimentConfig::env)
      .def_readwrite("strategy", &ExperimentConfig::strategy)
      .def_readwrite("memory_size", &ExperimentConfig::memory_size)
      .def_readwrite("total_steps", &ExperimentConfig::total_steps)
      .def_readwrite("eval_interval", &ExperimentConfig::eval_interval)
      .def_readwrite("eval_episodes", &ExperimentConfig::eval_episodes)
      .def_readwrite("seeds", &ExperimentConfig::seeds)
      .def_readwrite("lambda_", &ExperimentConfig::lambda)
      .def_readwrite("kernel", &ExperimentConfig::kernel)
      .def_readwrite("epsilon", &ExperimentConfig::epsilon)
      .def_readwrite("projection", &ExperimentConfig::projection)
      .def_readwrite("projection_dim", &ExperimentConfig::projection_dim)
      .def_readwrite("backend", &ExperimentConfig::backend)
      .def_readwrite("action_repeat", &ExperimentConfig::action_repeat)
      .def("validate", &ExperimentConfig::validate);

  py::class_<EvalRecord>(m, "EvalRecord")
      .def_readonly("seed", &EvalRecord::seed)
      .def_readonly("env", &EvalRecord::env)
      .def_readonly("strategy", &EvalRecord::strategy)
      .def_readonly("memory_size", &EvalRecord::memory_size)
      .def_readonly("step", &EvalRecord::step)
      .def_readonly("mean_eval_reward", &EvalRecord::mean_eval_reward)
      .def("__repr__", [](const EvalRecord& r) {
        std::ostringstream out;
        out << "EvalRecord(seed=" << r.seed << ", env=" << r.env
            << ", strategy=" << r.strategy << ", memory_size=" << r.memory_size
            << ", step=" << r.step << ", mean_eval_reward="
            << r.mean_eval_reward << ")";
        return out.str();
      });

  m.def("run_experiment", &run_experiment, py::arg("config"),
        py::call_guard<py::gil_scoped_release>(),
        "Runs every seed of the config and returns the eval records");
  m.def("run_single", &run_single, py::arg("config"), py::arg("seed"),
        py::call_guard<py::gil_scoped_release>());
  m.def("write_csv", &write_csv_file, py::arg("records"), py::arg("path"));
  m.def("read_csv", &read_csv_file, py::arg("path"));

  py::class_<AggregateRow>(m, "AggregateRow")
      .def_readonly("env", &AggregateRow::env)
      .def_readonly("strategy", &AggregateRow::strategy)
      .def_readonly("memory_size", &AggregateRow::memory_size)
      .def_readonly("seed_count", &AggregateRow::seed_count)
      .def_readonly("mean", &AggregateRow::mean)
      .def_readonly("stddev", &AggregateRow::stddev);

  m.def("aggregate_final", &aggregate_final, py::arg("records"),
        py::arg("last_n") = 10);

  py::class_<StreamSpec>(m, "StreamSpec")
      .def(py::init<>())
      .def_readwrite("seed", &StreamSpec::seed)
      .def_property(
          "skew_count",
          [](const StreamSpec& s) { return s.skew.count; },
          [](StreamSpec& s, int c) { s.skew.count = c; })
      .def_property(
          "grid_points_per_axis",
          [](const StreamSpec& s) { return s.grid.points_per_axis; },
          [](StreamSpec& s, int n) { s.grid.points_per_axis = n; })
      .def_property_readonly("total_count", &StreamSpec::total_count);

  m.def("synthetic_stream", &synthetic_stream, py::arg("spec"));

  py::class_<CentroidSnapshot>(m, "CentroidSnapshot")
      .def_readonly("method", &CentroidSnapshot::method)
      .def_readonly("fraction", &CentroidSnapshot::fraction)
      .def_readonly("centroids", &CentroidSnapshot::centroids)
      .def_readonly("counts", &CentroidSnapshot::counts);

  m.def("stream_study", &stream_study, py::arg("spec"), py::arg("memory_size"),
        py::call_guard<py::gil_scoped_release>());
  m.def("skew_phase_box", &skew_phase_box, py::arg("spec"));
  m.def("fraction_in_box", &fraction_in_box, py::arg("snapshot"),
        py::arg("box"));

  m.def("batch_kmeans",
        [](const std::vector<std::array<double, 2>>& points, std::size_t k,
           int max_iters, std::uint64_t seed) {
          const auto result = batch_kmeans(points, k, max_iters, seed);
          return py::make_tuple(result.centroids, result.assignment_counts,
                                result.inertia());
        },
        py::arg("points"), py::arg("k"), py::arg("max_iters") = 100,
        py::arg("seed") = 0);
}
