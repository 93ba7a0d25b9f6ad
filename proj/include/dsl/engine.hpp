#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "dsl/constraint_graph.hpp"
#include "dsl/dataset.hpp"
#include "dsl/evaluation.hpp"
#include "dsl/metric.hpp"
#include "dsl/random.hpp"
#include "dsl/skeleton.hpp"
#include "dsl/types.hpp"

namespace dsl {

/// Builds the initial skeleton by repeated nearest-representative linkage.
///
/// Each round links every representative to its nearest representative,
/// then keeps one node per reciprocal-nearest pair: the one with the larger
/// in-degree, which drops its edge to the partner. In-degree ties go to the
/// lower id when seed == 0 and to a seeded coin flip otherwise. The result
/// is a single tree with n - 1 unconfirmed edges.
DataSkeleton ds_init(const Dataset& ds, const Metric& metric, std::uint64_t seed = 0,
                     std::size_t index_threshold = kDefaultIndexThreshold);

enum class Verdict { MustLink, CannotLink, Unknown };

std::string_view to_string(Verdict v) noexcept;

/// Path length 0 -> MustLink, 1 -> CannotLink, longer or none -> Unknown.
Verdict verdict_from_path_length(std::optional<std::size_t> length) noexcept;

/// Deduction from the stored constraints alone; never queries.
Verdict deduce_verdict(const MinimalConstraintGraph& g, NodeId i, NodeId j);

enum class OracleMode { GroundTruth, Interactive };

enum class Phase { Idle, AwaitEdgeVerdict, AwaitCandidateVerdict, AwaitStandaloneVerdict, Done };

std::string_view to_string(Phase p) noexcept;

struct StepOutcome {
  enum class Kind {
    EdgeConfirmed,      // node -> partner verified
    Reattached,         // node joined partner's tree; `parent` received the new edge
    NewRepresentative,  // node now roots its own cluster
    AllConfirmed,       // nothing left to verify
    Suspended,          // waiting on a human answer
    Deduced,            // a standalone deduce() query was answered
  };

  Kind kind = Kind::AllConfirmed;
  NodeId node = 0;
  NodeId partner = 0;
  NodeId parent = 0;
  Verdict verdict = Verdict::Unknown;
};

std::string_view to_string(StepOutcome::Kind k) noexcept;

struct PendingQuery {
  NodeId i = 0;
  NodeId j = 0;
};

struct SessionOptions {
  std::uint64_t seed = 0;
  std::optional<std::size_t> budget;
  OracleMode oracle = OracleMode::GroundTruth;
  std::size_t index_threshold = kDefaultIndexThreshold;
};

enum class StopReason { AllConfirmed, BudgetExhausted, Accepted, AwaitingAnswer };

std::string_view to_string(StopReason r) noexcept;

struct RunResult {
  Labeling labels;
  IceTrace trace;
  StopReason reason = StopReason::AllConfirmed;
  std::size_t queries = 0;
  std::size_t steps = 0;
  std::optional<double> final_ari;
  std::optional<double> lambda;
  std::optional<double> query_bound;
  bool within_bound = true;
};

/// Resumable active-clustering loop over one dataset.
///
/// A session owns the skeleton and the minimal constraint graph. With a
/// ground-truth oracle every query is answered on the spot; with an
/// interactive oracle the session parks the pair and returns Suspended, and
/// `resume_with_answer` continues the interrupted step from where it stopped.
/// Given the same answers in the same order both modes reach identical states.
class Session {
 public:
  Session(std::shared_ptr<const Dataset> ds, Metric metric, SessionOptions options = {});
  /// Starts from a prebuilt skeleton instead of running ds_init.
  Session(std::shared_ptr<const Dataset> ds, Metric metric, DataSkeleton skeleton,
          SessionOptions options = {});

  /// Deduces (i, j); queries the oracle when the constraint graph cannot.
  /// Returns nullopt when an interactive query was parked.
  std::optional<Verdict> deduce(NodeId i, NodeId j);

  /// One refinement iteration on the most suspicious unconfirmed edge.
  StepOutcome recons_step();
  StepOutcome resume_with_answer(Theta theta);

  /// Runs steps until all edges are confirmed, the budget is spent, or a
  /// human answer is required. The budget is checked before each step, so
  /// the step in flight may overshoot it by at most k + 1 queries.
  StopReason drive();
  /// drive() followed by the final result.
  RunResult run();
  /// Ends the loop with whatever the current components are.
  void accept();

  RunResult result() const;

  const Dataset& dataset() const noexcept { return *ds_; }
  std::shared_ptr<const Dataset> dataset_ptr() const noexcept { return ds_; }
  const Metric& metric() const noexcept { return metric_; }
  const SessionOptions& options() const noexcept { return options_; }
  const DataSkeleton& skeleton() const noexcept { return skeleton_; }
  const MinimalConstraintGraph& constraints() const noexcept { return cgraph_; }
  Phase phase() const noexcept { return phase_; }
  bool done() const noexcept { return phase_ == Phase::Done; }
  bool accepted() const noexcept { return accepted_; }
  bool budget_exhausted() const noexcept;
  StopReason stop_reason() const noexcept { return stop_reason_; }
  const std::optional<PendingQuery>& pending() const noexcept { return pending_; }
  std::size_t query_count() const noexcept { return query_count_; }
  std::size_t step_count() const noexcept { return step_count_; }
  const IceTrace& trace() const noexcept { return trace_; }
  std::size_t cluster_count() const noexcept;
  std::optional<double> current_ari() const;
  /// Erroneous-edge rate of the initial skeleton (labels only).
  std::optional<double> initial_lambda() const noexcept { return lambda_; }
  Labeling labels() const { return connected_component_labels(skeleton_); }

 private:
  enum class Stage { None, Edge, Candidates };

  std::optional<Verdict> resolve(NodeId i, NodeId j, Phase await);
  void record_answer(NodeId i, NodeId j, Theta theta);
  void flush_sample();
  StepOutcome advance();
  StepOutcome finish(StepOutcome outcome);
  void require_open() const;

  std::shared_ptr<const Dataset> ds_;
  Metric metric_;
  SessionOptions options_;
  DataSkeleton skeleton_;
  MinimalConstraintGraph cgraph_;
  TieBreaker ties_;
  std::optional<ContingencyTracker> tracker_;
  std::optional<double> lambda_;
  std::size_t class_count_ = 0;

  Phase phase_ = Phase::Idle;
  StopReason stop_reason_ = StopReason::AllConfirmed;
  bool accepted_ = false;
  std::optional<PendingQuery> pending_;
  std::size_t query_count_ = 0;
  std::size_t step_count_ = 0;
  bool sample_due_ = false;
  IceTrace trace_;

  // State of the step in flight.
  Stage stage_ = Stage::None;
  NodeId step_source_ = 0;
  NodeId step_target_ = 0;
  std::vector<NodeId> candidates_;
  std::size_t cursor_ = 0;
};

}  // namespace dsl
