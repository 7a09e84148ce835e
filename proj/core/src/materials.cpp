#include "casimir/materials.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "casimir/constants.hpp"

namespace casimir {
namespace {

void validate_plasma(double omega_p) {
  if (!(omega_p > 0.0)) throw std::invalid_argument("plasma frequency must be > 0");
}

double interp_loglog(const Tabulated& t, double xi) {
  // Linear in (log xi, log(eps-1)): eps-1 spans many decades and is
  // asymptotically a power law on both ends.
  const auto& xs = t.xi;
  auto it = std::lower_bound(xs.begin(), xs.end(), xi);
  if (it == xs.begin()) ++it;
  const std::size_t j = static_cast<std::size_t>(it - xs.begin());
  const double lx0 = std::log(xs[j - 1]), lx1 = std::log(xs[j]);
  const double ly0 = std::log(t.eps[j - 1] - 1.0), ly1 = std::log(t.eps[j] - 1.0);
  const double w = (std::log(xi) - lx0) / (lx1 - lx0);
  return 1.0 + std::exp(ly0 + w * (ly1 - ly0));
}

}  // namespace

MaterialModel::MaterialModel(Plasma m) : v_(m) { validate_plasma(m.omega_p); }

MaterialModel::MaterialModel(Drude m) : v_(m) {
  validate_plasma(m.omega_p);
  if (m.gamma < 0.0) throw std::invalid_argument("Drude gamma must be >= 0");
}

MaterialModel::MaterialModel(Tabulated m) : v_(std::move(m)) {
  auto& t = std::get<Tabulated>(v_);
  if (t.xi.size() < 2 || t.xi.size() != t.eps.size())
    throw std::invalid_argument("tabulated model needs >= 2 samples");
  for (std::size_t i = 0; i < t.xi.size(); ++i) {
    if (!(t.xi[i] > 0.0)) throw std::invalid_argument("tabulated xi must be > 0");
    if (!(t.eps[i] > 1.0)) throw std::invalid_argument("tabulated eps must be > 1");
    if (i > 0 && !(t.xi[i] > t.xi[i - 1]))
      throw std::invalid_argument("tabulated xi must be strictly increasing");
  }
  // Low end: Drude fit through the two lowest nodes,
  //   (eps-1) xi (xi + gamma) = wp^2  at both points.
  const double a1 = (t.eps[0] - 1.0) * t.xi[0];
  const double a2 = (t.eps[1] - 1.0) * t.xi[1];
  const double denom = a1 - a2;
  double gamma = 0.0;
  if (std::fabs(denom) > 0.0) gamma = (a2 * t.xi[1] - a1 * t.xi[0]) / denom;
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) gamma = 0.0;
  const double wp2 = a1 * (t.xi[0] + gamma);
  t.low_freq_extension = Drude{std::sqrt(wp2), gamma};
  // High end: eps = 1 + A/xi^2 through the last node.
  t.high_freq_coeff = (t.eps.back() - 1.0) * t.xi.back() * t.xi.back();
}

double MaterialModel::low_freq_omega_p() const {
  if (auto* p = std::get_if<Plasma>(&v_)) return p->omega_p;
  if (auto* d = std::get_if<Drude>(&v_)) return d->omega_p;
  if (auto* t = std::get_if<Tabulated>(&v_)) return t->low_freq_extension.omega_p;
  return 0.0;
}

std::string MaterialModel::describe() const {
  std::ostringstream os;
  if (is_perfect_reflector()) {
    os << "perfect-reflector";
  } else if (auto* p = std::get_if<Plasma>(&v_)) {
    os << "plasma omega_p=" << rad_per_s_to_ev(p->omega_p) << "eV";
  } else if (auto* d = std::get_if<Drude>(&v_)) {
    os << "drude omega_p=" << rad_per_s_to_ev(d->omega_p)
       << "eV gamma=" << rad_per_s_to_ev(d->gamma) << "eV";
  } else if (auto* t = std::get_if<Tabulated>(&v_)) {
    os << "tabulated n=" << t->xi.size()
       << " fit omega_p=" << rad_per_s_to_ev(t->low_freq_extension.omega_p)
       << "eV gamma=" << rad_per_s_to_ev(t->low_freq_extension.gamma) << "eV";
  }
  return os.str();
}

double epsilon(const MaterialModel& model, double xi) {
  if (!(xi > 0.0)) throw std::domain_error("epsilon: xi must be > 0");
  return std::visit(
      [xi](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, PerfectReflector>) {
          throw std::logic_error(
              "epsilon: perfect reflector has no finite permittivity");
        } else if constexpr (std::is_same_v<T, Plasma>) {
          return 1.0 + (m.omega_p / xi) * (m.omega_p / xi);
        } else if constexpr (std::is_same_v<T, Drude>) {
          return 1.0 + m.omega_p * m.omega_p / (xi * (xi + m.gamma));
        } else {
          if (xi < m.xi.front()) {
            const auto& d = m.low_freq_extension;
            return 1.0 + d.omega_p * d.omega_p / (xi * (xi + d.gamma));
          }
          if (xi > m.xi.back()) return 1.0 + m.high_freq_coeff / (xi * xi);
          return interp_loglog(m, xi);
        }
      },
      model.variant());
}

FresnelPair fresnel(double k, double xi, const MaterialModel& model) {
  if (k < 0.0) throw std::domain_error("fresnel: k must be >= 0");
  if (!(xi > 0.0)) throw std::domain_error("fresnel: xi must be > 0");
  if (model.is_perfect_reflector()) return {1.0, -1.0};
  const double eps = epsilon(model, xi);
  const double q = xi / speed_of_light;
  const double kappa = std::hypot(k, q);
  const double kappa_m = std::sqrt(k * k + eps * q * q);
  return {(eps * kappa - kappa_m) / (eps * kappa + kappa_m),
          (kappa - kappa_m) / (kappa + kappa_m)};
}

double fresnel_te_zero_plasma(double k, double omega_p) {
  const double km = std::hypot(k, omega_p / speed_of_light);
  return (k - km) / (k + km);
}

MaterialModel load_tabulated(std::istream& in) {
  Tabulated t;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    double xi, eps;
    if (!(ls >> xi)) {
      std::string junk;
      if (ls.clear(), ls >> junk)
        throw std::runtime_error("permittivity table line " +
                                 std::to_string(lineno) + ": malformed record");
      continue;  // blank / comment-only line
    }
    if (!(ls >> eps))
      throw std::runtime_error("permittivity table line " +
                               std::to_string(lineno) + ": malformed record");
    std::string extra;
    if (ls >> extra)
      throw std::runtime_error("permittivity table line " +
                               std::to_string(lineno) + ": trailing fields");
    if (!t.xi.empty() && !(xi > t.xi.back()))
      throw std::runtime_error("permittivity table line " +
                               std::to_string(lineno) +
                               ": xi not strictly increasing");
    if (!(eps > 1.0))
      throw std::runtime_error("permittivity table line " +
                               std::to_string(lineno) + ": eps must be > 1");
    if (!(xi > 0.0))
      throw std::runtime_error("permittivity table line " +
                               std::to_string(lineno) + ": xi must be > 0");
    t.xi.push_back(xi);
    t.eps.push_back(eps);
  }
  if (t.xi.size() < 2)
    throw std::runtime_error("permittivity table: need at least 2 samples");
  return MaterialModel(std::move(t));
}

MaterialModel load_tabulated_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open permittivity table: " + path);
  return load_tabulated(f);
}

}  // namespace casimir
