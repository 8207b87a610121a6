#include "geoalm/multistart.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <random>
#include <stdexcept>
#include <string_view>
#include <thread>

namespace geoalm {

Point random_start(const Shape& shape, double lo, double hi, std::uint64_t seed,
                   std::size_t index) {
  if (!(lo <= hi)) throw std::invalid_argument("random_start: need lo <= hi");
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(shape.size());
  for (double& x : v) x = dist(rng);
  if (shape.kind == ShapeKind::sym_matrix) return Point::sym_matrix(shape.n, std::move(v));
  return Point::vector(std::move(v));
}

unsigned resolve_thread_count(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("GEOALM_THREADS")) {
    std::string_view s(env);
    unsigned value = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec == std::errc() && ptr == s.data() + s.size() && value > 0) return value;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::optional<std::size_t> match_reference(const ProblemSpec& p, const Point& w, double tol) {
  for (std::size_t r = 0; r < p.reference_points.size(); ++r) {
    if (dist_inf(w, p.reference_points[r]) <= tol) return r;
  }
  return std::nullopt;
}

std::vector<Cluster> cluster_limits(const ProblemSpec& p, const std::vector<Point>& limits,
                                    double tol, std::vector<std::size_t>* assignment) {
  std::vector<Cluster> clusters;
  if (assignment) assignment->clear();
  for (const Point& w : limits) {
    auto it = std::find_if(clusters.begin(), clusters.end(), [&](const Cluster& c) {
      return dist_inf(c.representative, w) <= tol;
    });
    if (assignment) assignment->push_back(static_cast<std::size_t>(it - clusters.begin()));
    if (it != clusters.end()) {
      ++it->count;
      continue;
    }
    Cluster c;
    c.representative = w;
    c.count = 1;
    c.f = p.f(w);
    c.reference = match_reference(p, w, tol);
    clusters.push_back(std::move(c));
  }
  return clusters;
}

MultistartReport multistart(const ProblemSpec& p, const MultistartConfig& cfg,
                            const AlmConfig& alm) {
  alm.validate();
  MultistartReport report;
  report.runs.resize(cfg.starts);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cfg.starts) return;
      try {
        StartOutcome& out = report.runs[i];
        out.index = i;
        out.start = random_start(p.w_shape, cfg.lo, cfg.hi, cfg.seed, i);
        out.result = alm_solve(p, out.start, alm);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(cfg.starts);
        return;
      }
    }
  };

  const unsigned threads =
      static_cast<unsigned>(std::min<std::size_t>(resolve_thread_count(cfg.threads),
                                                   std::max<std::size_t>(cfg.starts, 1)));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<Point> limits;
  limits.reserve(report.runs.size());
  for (const StartOutcome& r : report.runs) limits.push_back(r.result.w);
  std::vector<std::size_t> assignment;
  report.clusters = cluster_limits(p, limits, cfg.cluster_tol, &assignment);
  for (std::size_t i = 0; i < report.runs.size(); ++i) report.runs[i].cluster = assignment[i];
  return report;
}

}  // namespace geoalm
