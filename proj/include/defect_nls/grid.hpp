#pragma once

// Field evaluation on a (t, x) grid and CSV export.

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "defect_nls/config.hpp"

namespace defect_nls {

/// The system a RunConfig describes, with one field lookup per side.
class Scenario {
 public:
  explicit Scenario(const RunConfig& cfg) : mode_(cfg.mode) {
    switch (cfg.mode) {
      case Mode::defect_nsoliton:
        paired_ = build_paired_system(cfg.defect, cfg.solitons, cfg.psi0_init, cfg.pairing);
        break;
      case Mode::destructive:
        destructive_ = destructive_solution(cfg.defect, cfg.center_init.value_or(Vec2C{1.0, 1.0}));
        break;
      case Mode::whole_line:
        whole_line_ = DressingChain(cfg.solitons, Side::right);
        break;
    }
  }

  Mode mode() const noexcept { return mode_; }
  const PairedSystem* paired() const { return paired_ ? &*paired_ : nullptr; }
  const DestructiveSystem* destructive() const { return destructive_ ? &*destructive_ : nullptr; }
  const DressingChain* whole_line() const { return whole_line_ ? &*whole_line_ : nullptr; }

  Complex right_field(double t, double x) const {
    if (paired_) return paired_->right_field(t, x);
    if (destructive_) return destructive_->right_field(t, x);
    return dressed_field(*whole_line_, t, x);
  }

  Complex left_field(double t, double x) const {
    if (paired_) return paired_->left_field(t, x);
    if (destructive_) return destructive_->left_field(t, x);
    return dressed_field(*whole_line_, t, x);
  }

  /// Dressing chains present in the scenario, u-side first.
  std::vector<const DressingChain*> chains() const {
    if (paired_) return {&paired_->right, &paired_->left};
    if (destructive_) return {&destructive_->left};
    return {&*whole_line_};
  }

 private:
  Mode mode_;
  std::optional<PairedSystem> paired_;
  std::optional<DestructiveSystem> destructive_;
  std::optional<DressingChain> whole_line_;
};

struct FieldRow {
  double t = 0.0;
  double x = 0.0;
  /// 'L' for the u~-side, 'R' for the u-side.
  char side = 'R';
  Complex u{};
  bool overflow = false;
};

using FieldTable = std::vector<FieldRow>;

/// Worker count from DEFECT_NLS_THREADS (unset or 0 means hardware concurrency).
inline unsigned grid_threads() {
  unsigned n = 0;
  if (const char* env = std::getenv("DEFECT_NLS_THREADS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0') n = static_cast<unsigned>(std::min<unsigned long>(v, 1024));
  }
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return n;
}

namespace detail {

inline FieldRow evaluate_node(const Scenario& s, double t, double x, char side) {
  FieldRow row{t, x, side, {}, false};
  try {
    row.u = side == 'L' ? s.left_field(t, x) : s.right_field(t, x);
    row.overflow = !is_finite(row.u);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::OverflowRange && e.kind() != ErrorKind::NonFinite &&
        e.kind() != ErrorKind::DegenerateDressing) {
      throw;
    }
    row.overflow = true;
  }
  if (row.overflow) row.u = Complex{std::nan(""), std::nan("")};
  return row;
}

}  // namespace detail

/// Rows in t-major order, then x; x = 0 gives an L row followed by an R row.
inline FieldTable evaluate_grid(const Scenario& scenario, const GridSpec& grid, unsigned threads = grid_threads()) {
  std::vector<FieldTable> per_t(grid.nt);
  auto work = [&](std::size_t i) {
    const double t = grid.t_at(i);
    auto& rows = per_t[i];
    rows.reserve(grid.nx + 1);
    for (std::size_t k = 0; k < grid.nx; ++k) {
      const double x = grid.x_at(k);
      if (x <= 0.0) rows.push_back(detail::evaluate_node(scenario, t, x, 'L'));
      if (x >= 0.0) rows.push_back(detail::evaluate_node(scenario, t, x, 'R'));
    }
  };

  const unsigned n_workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(grid.nt)));
  if (n_workers == 1) {
    for (std::size_t i = 0; i < grid.nt; ++i) work(i);
  } else {
    std::vector<std::exception_ptr> errors(n_workers);
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (unsigned w = 0; w < n_workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < grid.nt; i += n_workers) work(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  FieldTable table;
  std::size_t total = 0;
  for (const auto& r : per_t) total += r.size();
  table.reserve(total);
  for (auto& r : per_t) table.insert(table.end(), r.begin(), r.end());
  return table;
}

inline FieldTable evaluate_grid(const RunConfig& cfg, unsigned threads = grid_threads()) {
  return evaluate_grid(Scenario(cfg), cfg.grid, threads);
}

inline constexpr std::string_view kCsvHeader = "t,x,side,re_u,im_u,abs_u,flag";

namespace detail {

inline void append_number(std::string& out, double v) {
  if (std::isnan(v)) {
    out += "nan";
    return;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

}  // namespace detail

inline std::string format_csv(const FieldTable& table) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& r : table) {
    detail::append_number(out, r.t);
    out += ',';
    detail::append_number(out, r.x);
    out += ',';
    out += r.side;
    out += ',';
    detail::append_number(out, r.u.real());
    out += ',';
    detail::append_number(out, r.u.imag());
    out += ',';
    detail::append_number(out, r.overflow ? std::nan("") : std::abs(r.u));
    out += r.overflow ? ",overflow\n" : ",ok\n";
  }
  return out;
}

inline void export_csv(const FieldTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoError, path + ": cannot open for writing");
  const auto text = format_csv(table);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorKind::IoError, path + ": write failed");
}

}  // namespace defect_nls
