#pragma once

#include <algorithm>
#include <exception>
#include <optional>
#include <thread>

namespace cliffop {

template <class T>
std::vector<T> grid_map(const std::function<T(std::span<const double>)>& f, const GridSpec& grid) {
  return grid_map(f, grid.points(), grid.threads);
}

template <class T>
std::vector<T> grid_map(const std::function<T(std::span<const double>)>& f, const std::vector<std::vector<double>>& pts,
                        int threads) {
  std::vector<std::optional<T>> slots(pts.size());
  std::vector<std::exception_ptr> errors(pts.size());

  unsigned workers = threads > 0 ? static_cast<unsigned>(threads) : std::thread::hardware_concurrency();
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(pts.size(), 1))));

  auto run = [&](unsigned w) {
    for (std::size_t i = w; i < pts.size(); i += workers) {
      try {
        slots[i] = f(pts[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<T> out;
  out.reserve(pts.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace cliffop
