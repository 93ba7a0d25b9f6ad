#include "dsl/engine.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>
#include <utility>

#include "dsl/error.hpp"

namespace dsl {

std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::MustLink: return "must_link";
    case Verdict::CannotLink: return "cannot_link";
    case Verdict::Unknown: return "unknown";
  }
  return "unknown";
}

std::string_view to_string(Phase p) noexcept {
  switch (p) {
    case Phase::Idle: return "idle";
    case Phase::AwaitEdgeVerdict: return "await_edge_verdict";
    case Phase::AwaitCandidateVerdict: return "await_candidate_verdict";
    case Phase::AwaitStandaloneVerdict: return "await_standalone_verdict";
    case Phase::Done: return "done";
  }
  return "unknown";
}

std::string_view to_string(StepOutcome::Kind k) noexcept {
  using K = StepOutcome::Kind;
  switch (k) {
    case K::EdgeConfirmed: return "edge_confirmed";
    case K::Reattached: return "reattached";
    case K::NewRepresentative: return "new_representative";
    case K::AllConfirmed: return "all_confirmed";
    case K::Suspended: return "suspended";
    case K::Deduced: return "deduced";
  }
  return "unknown";
}

std::string_view to_string(StopReason r) noexcept {
  switch (r) {
    case StopReason::AllConfirmed: return "all_confirmed";
    case StopReason::BudgetExhausted: return "budget_exhausted";
    case StopReason::Accepted: return "accepted";
    case StopReason::AwaitingAnswer: return "awaiting_answer";
  }
  return "unknown";
}

Verdict verdict_from_path_length(std::optional<std::size_t> length) noexcept {
  if (!length) return Verdict::Unknown;
  if (*length == 0) return Verdict::MustLink;
  if (*length == 1) return Verdict::CannotLink;
  return Verdict::Unknown;
}

Verdict deduce_verdict(const MinimalConstraintGraph& g, NodeId i, NodeId j) {
  const auto t = g.classify(i, j);
  if (!t) return Verdict::Unknown;
  return *t == Theta::MustLink ? Verdict::MustLink : Verdict::CannotLink;
}

namespace {

Verdict verdict_of(Theta t) { return t == Theta::MustLink ? Verdict::MustLink : Verdict::CannotLink; }

// Separate stream from ds_init so that both stay reproducible on their own.
constexpr std::uint64_t kReconsStream = 0x5eed'0f'1e'ab'0c'd5ULL;

}  // namespace

Session::Session(std::shared_ptr<const Dataset> ds, Metric metric, SessionOptions options)
    : Session(ds, metric, ds_init(*ds, metric, options.seed, options.index_threshold), options) {}

Session::Session(std::shared_ptr<const Dataset> ds, Metric metric, DataSkeleton skeleton,
                 SessionOptions options)
    : ds_(std::move(ds)),
      metric_(std::move(metric)),
      options_(options),
      skeleton_(std::move(skeleton)),
      cgraph_(ds_->size()),
      ties_(options.seed == 0 ? 0 : options.seed ^ kReconsStream) {
  metric_.validate(*ds_);
  if (skeleton_.node_count() != ds_->size())
    throw Error(ErrorCode::DimensionMismatch, "skeleton and dataset sizes differ");
  if (options_.oracle == OracleMode::GroundTruth && !ds_->has_labels())
    throw Error(ErrorCode::MissingLabels, "a ground-truth oracle needs labels");
  if (ds_->has_labels()) {
    tracker_.emplace(skeleton_, *ds_->labels());
    lambda_ = erroneous_edge_rate(skeleton_, *ds_->labels());
    class_count_ = ds_->class_count();
  }
  trace_.record({0, current_ari(), cluster_count()});
}

std::size_t Session::cluster_count() const noexcept {
  return skeleton_.node_count() - skeleton_.edge_count();
}

std::optional<double> Session::current_ari() const {
  if (!tracker_) return std::nullopt;
  return tracker_->ari();
}

bool Session::budget_exhausted() const noexcept {
  return options_.budget && query_count_ >= *options_.budget;
}

void Session::require_open() const {
  if (phase_ == Phase::Done) throw Error(ErrorCode::SessionDone, "session is done");
  if (pending_) throw Error(ErrorCode::PendingQueryExists, "a human answer is still pending");
}

void Session::record_answer(NodeId i, NodeId j, Theta theta) {
  cgraph_.add_constraint({i, j, theta});
  ++query_count_;
  sample_due_ = true;
}

void Session::flush_sample() {
  if (!sample_due_) return;
  sample_due_ = false;
  trace_.record({query_count_, current_ari(), cluster_count()});
}

std::optional<Verdict> Session::resolve(NodeId i, NodeId j, Phase await) {
  const Verdict known = deduce_verdict(cgraph_, i, j);
  if (known != Verdict::Unknown) return known;
  if (options_.oracle == OracleMode::GroundTruth) {
    const auto& labels = *ds_->labels();
    const Theta theta = labels[i] == labels[j] ? Theta::MustLink : Theta::CannotLink;
    record_answer(i, j, theta);
    return verdict_of(theta);
  }
  pending_ = PendingQuery{i, j};
  phase_ = await;
  return std::nullopt;
}

std::optional<Verdict> Session::deduce(NodeId i, NodeId j) {
  require_open();
  if (phase_ != Phase::Idle) throw Error(ErrorCode::PendingQueryExists, "a step is in flight");
  if (i == j || i >= ds_->size() || j >= ds_->size())
    throw std::invalid_argument("deduce needs two distinct valid nodes");
  auto v = resolve(i, j, Phase::AwaitStandaloneVerdict);
  flush_sample();
  return v;
}

StepOutcome Session::recons_step() {
  if (phase_ == Phase::Done && !accepted_ && skeleton_.unconfirmed_count() == 0)
    return {StepOutcome::Kind::AllConfirmed};
  require_open();
  if (phase_ != Phase::Idle) throw Error(ErrorCode::PendingQueryExists, "a step is in flight");
  const auto edge = skeleton_.max_suspicious_edge();
  if (!edge) {
    phase_ = Phase::Done;
    stop_reason_ = StopReason::AllConfirmed;
    return {StepOutcome::Kind::AllConfirmed};
  }
  stage_ = Stage::Edge;
  step_source_ = edge->source;
  step_target_ = edge->target;
  return advance();
}

StepOutcome Session::resume_with_answer(Theta theta) {
  if (!pending_) throw Error(ErrorCode::NoPendingQuery, "no query is pending");
  const PendingQuery q = *pending_;
  const Phase was = phase_;
  pending_.reset();
  phase_ = Phase::Idle;
  record_answer(q.i, q.j, theta);
  if (was == Phase::AwaitStandaloneVerdict) {
    flush_sample();
    StepOutcome out{StepOutcome::Kind::Deduced, q.i, q.j};
    out.verdict = verdict_of(theta);
    return out;
  }
  return advance();
}

StepOutcome Session::advance() {
  const NodeId i = step_source_;
  if (stage_ == Stage::Edge) {
    const auto v = resolve(i, step_target_, Phase::AwaitEdgeVerdict);
    if (!v) return {StepOutcome::Kind::Suspended, i, step_target_};
    if (*v == Verdict::MustLink) {
      skeleton_.confirm_edge(i);
      flush_sample();
      return finish({StepOutcome::Kind::EdgeConfirmed, i, step_target_, step_target_});
    }
    skeleton_.remove_edge(i);
    if (tracker_) tracker_->detach(skeleton_, i);
    flush_sample();

    const auto& reps = skeleton_.representatives();
    candidates_.assign(reps.begin(), reps.end());
    assert(!std::binary_search(candidates_.begin(), candidates_.end(), i));
    std::vector<std::pair<double, NodeId>> keyed;
    keyed.reserve(candidates_.size());
    for (NodeId r : candidates_) keyed.emplace_back(metric_(*ds_, i, r), r);
    std::sort(keyed.begin(), keyed.end());
    for (std::size_t k = 0; k < keyed.size(); ++k) candidates_[k] = keyed[k].second;
    cursor_ = 0;
    stage_ = Stage::Candidates;
  }

  while (cursor_ < candidates_.size()) {
    const NodeId r = candidates_[cursor_];
    const auto v = resolve(i, r, Phase::AwaitCandidateVerdict);
    if (!v) return {StepOutcome::Kind::Suspended, i, r};
    if (*v == Verdict::MustLink) {
      const std::size_t di = skeleton_.in_degree(i);
      const std::size_t dr = skeleton_.in_degree(r);
      const NodeId hi = di > dr ? i : dr > di ? r : ties_.pick(i, r);
      const NodeId lo = hi == i ? r : i;
      if (tracker_) tracker_->merge(skeleton_, lo, hi);
      skeleton_.add_edge(lo, hi, metric_(*ds_, i, r), true);
      skeleton_.erase_representative(lo);
      skeleton_.insert_representative(hi);
      flush_sample();
      return finish({StepOutcome::Kind::Reattached, i, r, hi});
    }
    flush_sample();
    ++cursor_;
  }
  skeleton_.insert_representative(i);
  flush_sample();
  return finish({StepOutcome::Kind::NewRepresentative, i, i, i});
}

StepOutcome Session::finish(StepOutcome outcome) {
  stage_ = Stage::None;
  candidates_.clear();
  cursor_ = 0;
  ++step_count_;
  assert(step_count_ + 1 <= skeleton_.node_count());
  return outcome;
}

StopReason Session::drive() {
  if (phase_ == Phase::Done) return stop_reason_;
  if (pending_) return StopReason::AwaitingAnswer;
  if (stage_ != Stage::None) {
    // A resumed step must be completed before the budget is consulted again.
    if (advance().kind == StepOutcome::Kind::Suspended) return StopReason::AwaitingAnswer;
  }
  for (;;) {
    if (budget_exhausted()) {
      stop_reason_ = StopReason::BudgetExhausted;
      phase_ = Phase::Done;
      return stop_reason_;
    }
    const auto out = recons_step();
    if (out.kind == StepOutcome::Kind::Suspended) return StopReason::AwaitingAnswer;
    if (out.kind == StepOutcome::Kind::AllConfirmed) return stop_reason_;
  }
}

void Session::accept() {
  if (phase_ == Phase::Done) return;
  pending_.reset();
  if (stage_ == Stage::Candidates) {
    // The detached node roots its own tree at this point.
    skeleton_.insert_representative(step_source_);
  }
  stage_ = Stage::None;
  candidates_.clear();
  phase_ = Phase::Done;
  accepted_ = true;
  stop_reason_ = StopReason::Accepted;
}

RunResult Session::run() {
  drive();
  return result();
}

RunResult Session::result() const {
  RunResult r;
  r.labels = labels();
  r.trace = trace_;
  r.reason = phase_ == Phase::Done ? stop_reason_ : StopReason::AwaitingAnswer;
  r.queries = query_count_;
  r.steps = step_count_;
  r.final_ari = current_ari();
  r.lambda = lambda_;
  if (lambda_) {
    r.query_bound = query_upper_bound(*lambda_, class_count_, ds_->size());
    r.within_bound = static_cast<double>(query_count_) <= *r.query_bound;
  }
  return r;
}

}  // namespace dsl
