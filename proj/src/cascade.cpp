#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <set>

#include "symidx/chain.hpp"

namespace symidx {

int cascade_grading_doubled(const CriticalComponent& c, const MorsePoint& p) {
  return c.rs_trans_doubled + 2 * p.morse_index - c.dim;
}

CascadeResult cascade_complex(const MorseBottData& data) {
  struct Info {
    std::size_t component;
    int doubled;
    double action;
  };
  std::unordered_map<std::string, Info> info;
  std::set<std::string> component_ids;
  std::vector<Generator> gens;
  for (std::size_t ci = 0; ci < data.components.size(); ++ci) {
    const auto& c = data.components[ci];
    if (!component_ids.insert(c.id).second) throw Error(ErrorKind::InvalidInput, "duplicate component '" + c.id + "'");
    if (c.dim < 0) throw Error(ErrorKind::InvalidInput, "component '" + c.id + "' has negative dimension");
    if (!std::isfinite(c.action)) throw Error(ErrorKind::InvalidInput, "component '" + c.id + "' has no finite action");
    for (const auto& p : c.points) {
      if (p.morse_index < 0 || p.morse_index > c.dim) {
        throw Error(ErrorKind::InvalidInput, "Morse index of '" + p.id + "' exceeds its component dimension");
      }
      const int mu = cascade_grading_doubled(c, p);
      if (!info.emplace(p.id, Info{ci, mu, c.action}).second) {
        throw Error(ErrorKind::InvalidInput, "duplicate Morse point '" + p.id + "'");
      }
      gens.push_back({p.id, mu, c.action});
    }
  }

  auto lookup = [&](const std::string& id) -> const Info& {
    auto it = info.find(id);
    if (it == info.end()) throw Error(ErrorKind::InvalidInput, "unknown Morse point '" + id + "'");
    return it->second;
  };
  auto check_grading = [&](const std::string& from, const std::string& to, const Info& a, const Info& b) {
    if (b.doubled != a.doubled - 2) {
      throw Error(ErrorKind::GradingMismatch, "entry " + from + " -> " + to + " does not lower mu by one");
    }
  };
  for (const auto& [from, to] : data.morse_flows) {
    const Info& a = lookup(from);
    const Info& b = lookup(to);
    if (a.component != b.component) {
      throw Error(ErrorKind::InvalidInput, "Morse flow " + from + " -> " + to + " joins different components");
    }
    check_grading(from, to, a, b);
  }
  for (const auto& [from, to] : data.cascades) {
    const Info& a = lookup(from);
    const Info& b = lookup(to);
    if (a.component == b.component) {
      throw Error(ErrorKind::InvalidInput, "cascade " + from + " -> " + to + " stays on one component");
    }
    if (!(b.action < a.action)) {
      throw Error(ErrorKind::ActionIncreasing, "cascade " + from + " -> " + to + " does not decrease the action");
    }
    check_grading(from, to, a, b);
  }

  std::vector<std::pair<std::string, std::string>> entries = data.morse_flows;
  entries.insert(entries.end(), data.cascades.begin(), data.cascades.end());

  CascadeResult result;
  result.complex = build_complex(gens, entries);
  // Lacunary: no grading-admissible pair across components, and the intra-component part vanishes mod 2.
  bool admissible_pair = false;
  for (std::size_t i = 0; i < gens.size() && !admissible_pair; ++i) {
    for (std::size_t k = 0; k < gens.size() && !admissible_pair; ++k) {
      const Info& a = info.at(gens[i].id);
      const Info& b = info.at(gens[k].id);
      admissible_pair = a.component != b.component && b.action < a.action && b.doubled == a.doubled - 2;
    }
  }
  result.lacunary = !admissible_pair && result.complex.boundary().is_zero();
  return result;
}

int sphere_rs_trans_doubled(int n, int k) { return 4 * k * (n - 1); }

MorseBottData unit_sphere_data(int n, int window) {
  if (n < 2) throw Error(ErrorKind::Parameter, "sphere dimension must be at least 2");
  if (window < 0) throw Error(ErrorKind::Parameter, "window must be non-negative");
  MorseBottData data;
  const int dim = 2 * n - 1;
  for (int k = -window; k <= window; ++k) {
    CriticalComponent c;
    c.id = "C" + std::to_string(k);
    c.dim = dim;
    c.action = k;
    c.rs_trans_doubled = sphere_rs_trans_doubled(n, k);
    for (int ind : {0, n - 1, n, 2 * n - 1}) c.points.push_back({c.id + ".m" + std::to_string(ind), ind});
    data.components.push_back(std::move(c));
  }
  return data;
}

std::vector<int> expected_sphere_support(int n, int window) {
  std::vector<int> out;
  for (int k = -window; k <= window; ++k) {
    for (int base : {-2 * n + 1, -1, 1, 2 * n - 1}) out.push_back(base + k * (4 * n - 4));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

RfhTable rfh_unit_sphere(int n, int window) {
  if (n < 4) throw Error(ErrorKind::Unsupported, "the lacunary computation needs n >= 4");
  if (window < 0) throw Error(ErrorKind::Parameter, "window must be non-negative");
  const CascadeResult res = cascade_complex(unit_sphere_data(n, window));
  RfhTable t;
  t.n = n;
  t.window = window;
  t.lacunary = res.lacunary;
  t.betti = homology(res.complex);
  for (const auto& [deg, b] : t.betti)
    if (b != 0) t.support.push_back(deg);
  return t;
}

std::vector<SpectrumValue> action_spectrum(const std::vector<double>& prime_speeds, int k_min, int k_max) {
  if (k_min > k_max) throw Error(ErrorKind::Parameter, "empty k range");
  for (double s : prime_speeds) {
    if (!(s > 0.0) || !std::isfinite(s)) throw Error(ErrorKind::Parameter, "prime speeds must be positive");
  }
  std::vector<double> values{0.0};
  for (double s : prime_speeds)
    for (int k = k_min; k <= k_max; ++k)
      if (k != 0) values.push_back(k * s);
  std::sort(values.begin(), values.end());
  std::vector<SpectrumValue> out;
  for (double v : values) {
    if (!out.empty() && std::abs(out.back().value - v) <= 1e-12 * std::max(1.0, std::abs(v))) {
      ++out.back().multiplicity;
    } else {
      out.push_back({v, 1});
    }
  }
  return out;
}

}  // namespace symidx
