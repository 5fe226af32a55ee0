#pragma once

// Monte Carlo sweeps over (N, p) grids, threshold bisection, handle-growth
// tables, and persistence of results and configurations.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <charconv>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <boost/archive/iterators/base64_from_binary.hpp>
#include <boost/archive/iterators/binary_from_base64.hpp>
#include <boost/archive/iterators/transform_width.hpp>
#include <json.hpp>

#include "plaqperc/crossing.hpp"
#include "plaqperc/error.hpp"
#include "plaqperc/homology.hpp"
#include "plaqperc/lattice.hpp"
#include "plaqperc/loops.hpp"
#include "plaqperc/rng.hpp"
#include "plaqperc/sampling.hpp"
#include "plaqperc/surface.hpp"

namespace plaqperc {

enum class EventKind { DualConnectivityCrossing, PlaquetteSeparation, NullHomologyLoop, DiskCrossingH1, MhUpperBound };

inline const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::DualConnectivityCrossing: return "dual_connectivity_crossing";
    case EventKind::PlaquetteSeparation: return "plaquette_separation";
    case EventKind::NullHomologyLoop: return "null_homology_loop";
    case EventKind::DiskCrossingH1: return "disk_crossing_h1";
    case EventKind::MhUpperBound: return "mh_upper_bound";
  }
  return "?";
}

inline EventKind parse_event_kind(const std::string& s) {
  for (auto k : {EventKind::DualConnectivityCrossing, EventKind::PlaquetteSeparation, EventKind::NullHomologyLoop,
                 EventKind::DiskCrossingH1, EventKind::MhUpperBound})
    if (s == to_string(k)) return k;
  throw InvalidArgument("unknown event '" + s + "'");
}

// For NullHomologyLoop the loop is width x height in the xy plane with its
// corner at the origin; the sweep size N is then the margin of the box around it.
struct Event {
  EventKind kind = EventKind::PlaquetteSeparation;
  int width = 0;
  int height = 0;

  static Event null_homology_loop(int w, int h) { return {EventKind::NullHomologyLoop, w, h}; }
};

inline std::string to_string(const Event& e) {
  std::string s = to_string(e.kind);
  if (e.kind == EventKind::NullHomologyLoop) s += "(" + std::to_string(e.width) + "x" + std::to_string(e.height) + ")";
  return s;
}

struct SweepSpec {
  Event event;
  std::vector<int> sizes;
  std::vector<double> p_grid;  // plaquette-open probability for every event
  std::size_t samples = 1;
  std::uint64_t master_seed = 0;
  std::size_t threads = 1;

  void validate() const {
    if (samples < 1) throw InvalidArgument("samples must be at least 1");
    if (sizes.empty() || p_grid.empty()) throw InvalidArgument("sweep needs at least one size and one p");
    for (double p : p_grid) check_probability(p);
    for (int n : sizes)
      if (n < 1) throw InvalidArgument("box sizes must be positive");
    if (event.kind == EventKind::NullHomologyLoop && (event.width < 1 || event.height < 1))
      throw InvalidArgument("null-homology loop needs positive width and height");
    if (event.kind == EventKind::DiskCrossingH1)
      for (int n : sizes)
        if (n < 2) throw InvalidArgument("disk crossing needs N at least 2");
  }
};

// Fields mirror SweepSpec: {"event": name, "loop": {"width", "height"},
// "sizes": [...], "p": [...], "samples", "seed", "threads"}.
inline SweepSpec sweep_spec_from_json(const nlohmann::json& j) {
  SweepSpec s;
  try {
    s.event.kind = parse_event_kind(j.at("event").get<std::string>());
    if (s.event.kind == EventKind::NullHomologyLoop) {
      s.event.width = j.at("loop").at("width").get<int>();
      s.event.height = j.at("loop").at("height").get<int>();
    }
    s.sizes = j.at("sizes").get<std::vector<int>>();
    s.p_grid = j.at("p").get<std::vector<double>>();
    s.samples = j.at("samples").get<std::size_t>();
    s.master_seed = j.value("seed", std::uint64_t{0});
    s.threads = j.value("threads", std::size_t{1});
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed sweep spec: ") + e.what());
  }
  s.validate();
  return s;
}

inline nlohmann::json to_json(const SweepSpec& s) {
  nlohmann::json j{{"event", to_string(s.event.kind)}, {"sizes", s.sizes},         {"p", s.p_grid},
                   {"samples", s.samples},            {"seed", s.master_seed},     {"threads", s.threads}};
  if (s.event.kind == EventKind::NullHomologyLoop) j["loop"] = {{"width", s.event.width}, {"height", s.event.height}};
  return j;
}

struct ResultRow {
  std::string event;
  int N = 0;
  double p = 0.0;
  std::size_t samples = 0;
  std::size_t successes = 0;
  double estimate = 0.0;
  double standard_error = 0.0;
  std::optional<double> mean_statistic;  // mean finite mh over separating samples
  double wall_seconds = 0.0;
};

inline double binomial_stderr(std::size_t successes, std::size_t n) {
  const double f = static_cast<double>(successes) / static_cast<double>(n);
  return std::sqrt(f * (1.0 - f) / static_cast<double>(n));
}

// Box on which an event is evaluated at size N.
inline BoxSpec event_box(const Event& e, int n) {
  if (e.kind == EventKind::NullHomologyLoop) return BoxSpec({-n, -n, -n}, {e.width + n, e.height + n, n});
  return BoxSpec::sized(n, n, n);
}

struct SampleOutcome {
  bool success = false;
  std::optional<double> statistic;
};

inline SampleOutcome evaluate_event(const Event& e, int n, double p, std::uint64_t seed) {
  const BoxSpec box = event_box(e, n);
  const PlaquetteConfig cfg = sample_config(box, p, seed);
  switch (e.kind) {
    case EventKind::DualConnectivityCrossing: return {dual_crossing(coupled_dual(cfg)), {}};
    case EventKind::PlaquetteSeparation: return {separates_top_bottom(cfg), {}};
    case EventKind::NullHomologyLoop:
      return {is_null_homologous(rectangular_loop({0, 0, 0}, e.width, e.height, Plane::xy()), cfg), {}};
    case EventKind::DiskCrossingH1: return {disk_crossing_h1(apply_boundary(cfg, BoundaryKind::WiredD2)), {}};
    case EventKind::MhUpperBound: {
      const MhResult r = mh_upper_bound(cfg);
      if (!r.finite()) return {false, {}};
      return {true, static_cast<double>(r.value)};
    }
  }
  return {};
}

namespace detail {

// Evaluates f(i) for i in [0, count) on up to `threads` threads with a static
// partition; the output order is the index order whatever the thread count.
template <typename T, typename F>
std::vector<T> parallel_map(std::size_t count, std::size_t threads, F&& f) {
  std::vector<T> out(count);
  const std::size_t workers = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(count, 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = f(i);
    return out;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = count * w / workers; i < count * (w + 1) / workers; ++i) out[i] = f(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace detail

// Rows in spec order: sizes outer, p grid inner.
inline std::vector<ResultRow> run_sweep(const SweepSpec& spec) {
  spec.validate();
  std::vector<ResultRow> rows;
  std::uint64_t row_index = 0;
  for (int n : spec.sizes) {
    for (double p : spec.p_grid) {
      const auto start = std::chrono::steady_clock::now();
      const auto outcomes = detail::parallel_map<SampleOutcome>(spec.samples, spec.threads, [&](std::size_t s) {
        return evaluate_event(spec.event, n, p, mix_seed(spec.master_seed, {row_index, s}));
      });
      ResultRow row;
      row.event = to_string(spec.event);
      row.N = n;
      row.p = p;
      row.samples = spec.samples;
      double stat_sum = 0.0;
      std::size_t stat_count = 0;
      for (const auto& o : outcomes) {
        row.successes += o.success;
        if (o.statistic) {
          stat_sum += *o.statistic;
          ++stat_count;
        }
      }
      row.estimate = static_cast<double>(row.successes) / static_cast<double>(row.samples);
      row.standard_error = binomial_stderr(row.successes, row.samples);
      if (stat_count > 0) row.mean_statistic = stat_sum / static_cast<double>(stat_count);
      row.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      rows.push_back(std::move(row));
      ++row_index;
    }
  }
  return rows;
}

namespace detail {

// Shortest text that reads back to the same double.
inline std::string format_double(double x) {
  char buf[40];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

}  // namespace detail

// Wall time varies between runs, so it is written only on request; the
// column stays so the layout is fixed.
inline void write_csv(std::ostream& os, const std::vector<ResultRow>& rows, bool with_wall_time = false) {
  os << "event,N,p,samples,successes,estimate,stderr,mean_statistic,wall_time\n";
  for (const auto& r : rows) {
    os << r.event << ',' << r.N << ',' << detail::format_double(r.p) << ',' << r.samples << ',' << r.successes << ','
       << detail::format_double(r.estimate) << ',' << detail::format_double(r.standard_error) << ',';
    if (r.mean_statistic) os << detail::format_double(*r.mean_statistic);
    os << ',';
    if (with_wall_time) os << detail::format_double(r.wall_seconds);
    os << '\n';
  }
  if (!os) throw IoError("failed writing CSV output");
}

inline void write_jsonl(std::ostream& os, const std::vector<ResultRow>& rows, bool with_wall_time = false) {
  for (const auto& r : rows) {
    nlohmann::ordered_json j{{"event", r.event},         {"N", r.N},
                             {"p", r.p},                 {"samples", r.samples},
                             {"successes", r.successes}, {"estimate", r.estimate},
                             {"stderr", r.standard_error}};
    j["mean_statistic"] = r.mean_statistic ? nlohmann::ordered_json(*r.mean_statistic) : nlohmann::ordered_json();
    j["wall_time"] = with_wall_time ? nlohmann::ordered_json(r.wall_seconds) : nlohmann::ordered_json();
    os << j.dump() << '\n';
  }
  if (!os) throw IoError("failed writing JSON lines output");
}

struct ThresholdEstimate {
  double p_hat = 0.0;
  double half_width = 0.0;  // bisection resolution plus the binomial band around the 0.5 level
  std::size_t evaluations = 0;
};

inline constexpr std::uint64_t kThresholdStream = 0x7468726573686f6cULL;

namespace detail {

// Crossing fraction of the dual event at bond density q, on seeds shared by
// every q so the empirical curve is monotone.
inline double dual_crossing_fraction(int n, double q, std::size_t samples, std::uint64_t seed, std::size_t threads) {
  const BoxSpec box = BoxSpec::sized(n, n, n);
  const auto hits = parallel_map<char>(samples, threads, [&](std::size_t s) {
    return static_cast<char>(dual_crossing(coupled_dual(sample_config(box, 1.0 - q, mix_seed(seed, {kThresholdStream, s})))));
  });
  return static_cast<double>(std::count(hits.begin(), hits.end(), char{1})) / static_cast<double>(samples);
}

// Smallest x in [lo, hi] (to within tol) where the nondecreasing f reaches level.
template <typename F>
std::pair<double, double> bisect_level(F&& f, double lo, double hi, double level, double tol, std::size_t& evals) {
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    ++evals;
    if (f(mid) >= level) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return {lo, hi};
}

}  // namespace detail

// Level-0.5 point of the crossing probability at size N. DualConnectivityCrossing
// is parametrized by the dual bond density q and PlaquetteSeparation by the
// plaquette density p; by the coupling the two estimates sum to 1 exactly.
inline ThresholdEstimate estimate_threshold(EventKind event, int n, std::size_t samples, std::pair<double, double> bracket,
                                            double tol, std::uint64_t master_seed = 0, std::size_t threads = 1) {
  if (event != EventKind::DualConnectivityCrossing && event != EventKind::PlaquetteSeparation)
    throw InvalidArgument("threshold estimation supports the two crossing events");
  if (samples < 1) throw InvalidArgument("samples must be at least 1");
  if (!(tol > 0.0)) throw InvalidArgument("tolerance must be positive");
  auto [lo, hi] = bracket;
  check_probability(lo);
  check_probability(hi);
  if (!(lo < hi)) throw InvalidArgument("bracket must satisfy lo < hi");
  const bool mirrored = event == EventKind::PlaquetteSeparation;
  if (mirrored) std::tie(lo, hi) = std::pair{1.0 - hi, 1.0 - lo};

  ThresholdEstimate out;
  const auto f = [&](double q) { return detail::dual_crossing_fraction(n, q, samples, master_seed, threads); };
  out.evaluations = 2;
  if (f(lo) >= 0.5 || f(hi) < 0.5) throw InvalidArgument("bracket does not straddle the 0.5 crossing level");

  const auto [a, b] = detail::bisect_level(f, lo, hi, 0.5, tol, out.evaluations);
  double q_hat = 0.5 * (a + b);
  double half = 0.5 * (b - a);
  // Points where the curve passes 0.5 -/+ 1.96 sigma bound the statistical spread.
  const double band = 1.96 * 0.5 / std::sqrt(static_cast<double>(samples));
  const double low_level = std::max(0.5 - band, 1.0 / static_cast<double>(samples));
  const double high_level = std::min(0.5 + band, 1.0);
  if (f(lo) < low_level && f(hi) >= high_level) {
    const auto [l0, l1] = detail::bisect_level(f, lo, hi, low_level, tol, out.evaluations);
    const auto [h0, h1] = detail::bisect_level(f, lo, hi, high_level, tol, out.evaluations);
    out.evaluations += 2;
    half += 0.5 * (0.5 * (h0 + h1) - 0.5 * (l0 + l1));
  } else {
    half = std::max(half, 0.5 * (hi - lo));
  }
  out.p_hat = mirrored ? 1.0 - q_hat : q_hat;
  out.half_width = half;
  return out;
}

inline constexpr double kInfiniteStatistic = std::numeric_limits<double>::infinity();

struct MhGrowthRow {
  int N = 0;
  double median = 0.0;  // infinite when at least half the samples do not separate
  double lower_quartile = 0.0;
  double upper_quartile = 0.0;
  double fraction_non_separating = 0.0;
  std::vector<double> values;  // per sample, infinite when not separating
};

namespace detail {

// Linear-interpolation quantile of an ascending sample.
inline double quantile(const std::vector<double>& sorted, double t) {
  if (sorted.empty()) return kInfiniteStatistic;
  const double pos = t * static_cast<double>(sorted.size() - 1);
  const std::size_t i = static_cast<std::size_t>(pos);
  if (i + 1 >= sorted.size()) return sorted.back();
  const double frac = pos - static_cast<double>(i);
  return frac == 0.0 ? sorted[i] : sorted[i] + frac * (sorted[i + 1] - sorted[i]);
}

}  // namespace detail

inline constexpr std::uint64_t kGrowthStream = 0x67726f777468ULL;

inline std::vector<MhGrowthRow> mh_growth_experiment(double p, const std::vector<int>& sizes, std::size_t samples,
                                                     std::uint64_t master_seed = 0, std::size_t threads = 1) {
  check_probability(p);
  if (samples < 1) throw InvalidArgument("samples must be at least 1");
  std::vector<MhGrowthRow> out;
  for (std::size_t r = 0; r < sizes.size(); ++r) {
    MhGrowthRow row;
    row.N = sizes[r];
    const BoxSpec box = BoxSpec::sized(row.N, row.N, row.N);
    row.values = detail::parallel_map<double>(samples, threads, [&](std::size_t s) {
      const MhResult m = mh_upper_bound(sample_config(box, p, mix_seed(master_seed, {kGrowthStream, r, s})));
      return m.finite() ? static_cast<double>(m.value) : kInfiniteStatistic;
    });
    std::vector<double> finite;
    for (double v : row.values)
      if (std::isfinite(v)) finite.push_back(v);
    std::sort(finite.begin(), finite.end());
    const std::size_t infinite = samples - finite.size();
    row.fraction_non_separating = static_cast<double>(infinite) / static_cast<double>(samples);
    if (2 * infinite >= samples) {
      row.median = row.lower_quartile = row.upper_quartile = kInfiniteStatistic;
    } else {
      row.median = detail::quantile(finite, 0.5);
      row.lower_quartile = detail::quantile(finite, 0.25);
      row.upper_quartile = detail::quantile(finite, 0.75);
    }
    out.push_back(std::move(row));
  }
  return out;
}

// Config files: one header line, then the base64 of the open bit-vector packed
// little-endian, eight plaquettes per byte in plaquette order.
namespace detail {

inline std::string base64_encode(const std::string& bytes) {
  using namespace boost::archive::iterators;
  using Encoder = base64_from_binary<transform_width<std::string::const_iterator, 6, 8>>;
  std::string out(Encoder(bytes.begin()), Encoder(bytes.end()));
  out.append((3 - bytes.size() % 3) % 3, '=');
  return out;
}

inline std::string base64_decode(std::string text) {
  using namespace boost::archive::iterators;
  using Decoder = transform_width<binary_from_base64<std::string::const_iterator>, 8, 6>;
  std::size_t pad = 0;
  while (!text.empty() && text.back() == '=') {
    text.pop_back();
    ++pad;
  }
  if (pad > 2 || text.size() % 4 == 1) throw IoError("malformed base64 payload");
  try {
    return std::string(Decoder(text.begin()), Decoder(text.end()));
  } catch (const std::exception&) {
    throw IoError("malformed base64 payload");
  }
}

inline BoundaryKind parse_boundary(const std::string& s) {
  for (auto k : {BoundaryKind::Free, BoundaryKind::WiredD2, BoundaryKind::WiredD1})
    if (s == to_string(k)) return k;
  throw IoError("unknown boundary '" + s + "'");
}

}  // namespace detail

inline void write_config(std::ostream& os, const PlaquetteConfig& cfg) {
  const BoxSpec& b = cfg.box;
  os << "box=" << b.lo[0] << ',' << b.lo[1] << ',' << b.lo[2] << ',' << b.hi[0] << ',' << b.hi[1] << ',' << b.hi[2]
     << ";p=" << detail::format_double(cfg.p) << ";seed=" << cfg.seed;
  if (b.boundary != BoundaryKind::Free) os << ";bc=" << to_string(b.boundary);
  os << '\n';
  std::string bytes((cfg.open.size() + 7) / 8, '\0');
  for (std::size_t i = 0; i < bytes.size(); ++i)
    bytes[i] = static_cast<char>((cfg.open.words()[i / 8] >> (8 * (i % 8))) & 0xff);
  os << detail::base64_encode(bytes) << '\n';
  if (!os) throw IoError("failed writing configuration");
}

inline PlaquetteConfig read_config(std::istream& is) {
  std::string header, payload;
  if (!std::getline(is, header) || !std::getline(is, payload)) throw IoError("configuration needs a header and a payload line");
  Vec3 lo{}, hi{};
  std::optional<double> p;
  std::optional<std::uint64_t> seed;
  BoundaryKind bc = BoundaryKind::Free;
  bool have_box = false;
  std::istringstream fields(header);
  std::string field;
  try {
    while (std::getline(fields, field, ';')) {
      const auto eq = field.find('=');
      if (eq == std::string::npos) throw IoError("header field without '=': " + field);
      const std::string key = field.substr(0, eq), value = field.substr(eq + 1);
      if (key == "box") {
        std::istringstream v(value);
        char comma = ',';
        v >> lo[0] >> comma >> lo[1] >> comma >> lo[2] >> comma >> hi[0] >> comma >> hi[1] >> comma >> hi[2];
        if (!v || !v.eof()) throw IoError("malformed box '" + value + "'");
        have_box = true;
      } else if (key == "p") {
        p = std::stod(value);
      } else if (key == "seed") {
        seed = std::stoull(value);
      } else if (key == "bc") {
        bc = detail::parse_boundary(value);
      } else {
        throw IoError("unknown header field '" + key + "'");
      }
    }
  } catch (const std::logic_error&) {
    throw IoError("malformed number in configuration header");
  }
  if (!have_box || !p || !seed) throw IoError("configuration header needs box, p and seed");
  const BoxSpec box(lo, hi, bc);
  PlaquetteConfig cfg(box, *p, *seed);
  const std::string bytes = detail::base64_decode(payload);
  if (bytes.size() != (cfg.open.size() + 7) / 8) throw IoError("payload length does not match the box");
  for (std::size_t i = 0; i < cfg.open.size(); ++i)
    if ((static_cast<unsigned char>(bytes[i / 8]) >> (i % 8)) & 1u) cfg.open.set(i);
  return cfg;
}

}  // namespace plaqperc
