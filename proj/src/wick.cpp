// Copyright 2026 The kmm-bkp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "kmm/wick.hpp"

#include <omp.h>

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>

namespace kmm {

ExternalField::ExternalField(std::vector<Rational> lambdas) : lambdas_(std::move(lambdas)) {
  if (lambdas_.empty()) throw DomainError("external field needs at least one eigenvalue");
  for (auto& l : lambdas_) {
    l.canonicalize();
    if (l <= 0) throw DomainError("external field eigenvalues must be positive, got " + to_string(l));
  }
}

ExternalField ExternalField::random(int n, std::uint64_t seed, int max_entry) {
  if (n < 1) throw DomainError("field size must be positive");
  if (max_entry < 2) throw DomainError("max_entry must be at least 2");
  std::mt19937_64 rng(seed);
  std::set<Rational> seen;
  std::vector<Rational> out;
  const auto draw = [&] { return static_cast<long>(1 + rng() % static_cast<std::uint64_t>(max_entry)); };
  while (static_cast<int>(out.size()) < n) {
    long p = draw();
    long q = draw();
    Rational l(p, q);
    l.canonicalize();
    if (seen.insert(l).second) out.push_back(l);
  }
  return ExternalField(std::move(out));
}

std::vector<double> ExternalField::as_doubles() const {
  std::vector<double> out;
  out.reserve(lambdas_.size());
  for (const auto& l : lambdas_) out.push_back(l.get_d());
  return out;
}

GSeries::GSeries(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) coeffs_.emplace_back(0);
}

GSeries GSeries::constant(const Rational& c, int order) {
  GSeries s(order);
  s[0] = c;
  return s;
}

bool GSeries::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Rational& c) { return c == 0; });
}

GSeries& GSeries::operator+=(const GSeries& o) {
  coeffs_.resize(std::min(coeffs_.size(), o.coeffs_.size()));
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

GSeries& GSeries::operator-=(const GSeries& o) {
  coeffs_.resize(std::min(coeffs_.size(), o.coeffs_.size()));
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

GSeries& GSeries::operator*=(const Rational& c) {
  for (auto& x : coeffs_) x *= c;
  return *this;
}

GSeries operator*(const GSeries& a, const GSeries& b) {
  const int order = std::min(a.order(), b.order());
  GSeries out(order);
  for (int i = 0; i <= order; ++i) {
    for (int j = 0; i + j <= order; ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

GSeries operator/(const GSeries& a, const GSeries& b) {
  if (b[0] == 0) throw DomainError("GSeries division by a non-unit");
  const int order = std::min(a.order(), b.order());
  GSeries out(order);
  for (int p = 0; p <= order; ++p) {
    Rational acc = a[p];
    for (int i = 1; i <= p; ++i) acc -= b[i] * out[p - i];
    out[p] = acc / b[0];
  }
  return out;
}

std::string GSeries::to_string() const {
  std::ostringstream out;
  for (int p = 0; p <= order(); ++p) {
    if (p) out << " + ";
    out << '(' << kmm::to_string(coeffs_[static_cast<std::size_t>(p)]) << ')';
    if (p == 1) out << " g";
    if (p > 1) out << " g^" << p;
  }
  return out.str();
}

Rational covariance(int a, int b, int c, int d, const ExternalField& field) {
  const int n = field.size();
  for (int idx : {a, b, c, d}) {
    if (idx < 0 || idx >= n) {
      throw DomainError("matrix index " + std::to_string(idx) + " outside 0.." +
                        std::to_string(n - 1));
    }
  }
  if (a != d || b != c) return 0;
  return Rational(2) / (field.lambda(a) + field.lambda(b));
}

double pairing_count(int degree) {
  if (degree % 2) return 0;
  double c = 1;
  for (int k = degree - 1; k > 1; k -= 2) c *= k;
  return c;
}

namespace {

struct SlotLayout {
  int degree = 0;
  std::vector<int> col;  // slot k holds H_{k, col[k]} in position labels
};

SlotLayout make_layout(std::span<const int> powers) {
  SlotLayout lay;
  for (int p : powers) {
    if (p < 1) throw DomainError("trace powers must be positive");
    const int base = lay.degree;
    for (int j = 0; j < p; ++j) lay.col.push_back(base + (j + 1) % p);
    lay.degree += p;
  }
  return lay;
}

void check_cap(int degree, const WickOptions& options) {
  if (degree > options.degree_cap) {
    const double cost = pairing_count(degree);
    std::ostringstream msg;
    msg << "Gaussian integrand of degree " << degree << " exceeds the degree cap "
        << options.degree_cap << " (about " << cost << " Wick pairings)";
    throw CapExceeded(msg.str(), cost);
  }
}

int find(std::vector<int>& parent, int x) {
  while (parent[static_cast<std::size_t>(x)] != x) {
    auto& p = parent[static_cast<std::size_t>(x)];
    p = parent[static_cast<std::size_t>(p)];
    x = p;
  }
  return x;
}

void unite(std::vector<int>& parent, int a, int b) {
  a = find(parent, a);
  b = find(parent, b);
  if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
}

/// Face labels (0..F-1, first appearance) of the positions under a pairing.
int label_faces(const SlotLayout& lay, const std::vector<int>& partner, std::vector<int>& parent,
                std::vector<int>& face_of) {
  const auto d = static_cast<std::size_t>(lay.degree);
  parent.resize(d);
  std::iota(parent.begin(), parent.end(), 0);
  for (int k = 0; k < lay.degree; ++k) {
    const int l = partner[static_cast<std::size_t>(k)];
    if (l < k) continue;
    // <H_{k,col k} H_{l,col l}> forces k ~ col l and col k ~ l
    unite(parent, k, lay.col[static_cast<std::size_t>(l)]);
    unite(parent, lay.col[static_cast<std::size_t>(k)], l);
  }
  face_of.assign(d, -1);
  std::vector<int> id_of_root(d, -1);
  int faces = 0;
  for (std::size_t pos = 0; pos < d; ++pos) {
    auto r = static_cast<std::size_t>(find(parent, static_cast<int>(pos)));
    if (id_of_root[r] < 0) id_of_root[r] = faces++;
    face_of[pos] = id_of_root[r];
  }
  return faces;
}

/// Scaled propagators: 2/(lambda_a+lambda_b) = weight[a][b] / scale.
struct ScaledWeights {
  int n = 0;
  std::vector<Integer> weight;
  Integer scale = 1;

  explicit ScaledWeights(const ExternalField& field) : n(field.size()) {
    std::vector<Rational> w(static_cast<std::size_t>(n * n));
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        w[static_cast<std::size_t>(a * n + b)] = Rational(2) / (field.lambda(a) + field.lambda(b));
        mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(),
                w[static_cast<std::size_t>(a * n + b)].get_den_mpz_t());
      }
    }
    weight.reserve(w.size());
    for (const auto& x : w) {
      Rational s = x * scale;
      weight.push_back(s.get_num());
    }
  }

  const Integer& at(int a, int b) const { return weight[static_cast<std::size_t>(a * n + b)]; }
};

/// sum over maps faces -> {0..N-1} of prod over edges weight[f(a)][f(b)].
class FaceSum {
 public:
  FaceSum(const ScaledWeights& w, int faces, const std::vector<std::pair<int, int>>& edges)
      : w_(w), faces_(faces), back_(static_cast<std::size_t>(faces)),
        assign_(static_cast<std::size_t>(faces)), stack_(static_cast<std::size_t>(faces) + 1) {
    for (auto [a, b] : edges) back_[static_cast<std::size_t>(b)].push_back(a);
  }

  Integer run() {
    total_ = 0;
    stack_[0] = 1;
    descend(0);
    return total_;
  }

 private:
  void descend(int i) {
    if (i == faces_) {
      total_ += stack_[static_cast<std::size_t>(faces_)];
      return;
    }
    const auto si = static_cast<std::size_t>(i);
    for (int v = 0; v < w_.n; ++v) {
      assign_[si] = v;
      Integer& p = stack_[si + 1];
      p = stack_[si];
      for (int a : back_[si]) p *= w_.at(assign_[static_cast<std::size_t>(a)], v);
      descend(i + 1);
    }
  }

  const ScaledWeights& w_;
  int faces_;
  std::vector<std::vector<int>> back_;
  std::vector<int> assign_;
  std::vector<Integer> stack_;
  Integer total_;
};

/// Per-thread scratch space and component cache for the pairing kernel.
class PairingEvaluator {
 public:
  PairingEvaluator(const SlotLayout& lay, const ScaledWeights& w) : lay_(lay), w_(w) {}

  void add(const std::vector<int>& partner, Integer& sum) {
    const int faces = label_faces(lay_, partner, parent_, face_of_);
    edges_.clear();
    for (int k = 0; k < lay_.degree; ++k) {
      if (partner[static_cast<std::size_t>(k)] < k) continue;
      int a = face_of_[static_cast<std::size_t>(k)];
      int b = face_of_[static_cast<std::size_t>(lay_.col[static_cast<std::size_t>(k)])];
      edges_.emplace_back(std::min(a, b), std::max(a, b));
    }
    // decouple face classes into connected components of the face graph
    comp_parent_.resize(static_cast<std::size_t>(faces));
    std::iota(comp_parent_.begin(), comp_parent_.end(), 0);
    for (auto [a, b] : edges_) unite(comp_parent_, a, b);

    product_ = 1;
    local_.assign(static_cast<std::size_t>(faces), -1);
    for (int root = 0; root < faces; ++root) {
      if (find(comp_parent_, root) != root) continue;
      // relabel this component by first appearance along the edge list
      int count = 0;
      comp_edges_.clear();
      for (auto [a, b] : edges_) {
        if (find(comp_parent_, a) != root) continue;
        for (int f : {a, b}) {
          if (local_[static_cast<std::size_t>(f)] < 0) local_[static_cast<std::size_t>(f)] = count++;
        }
        int la = local_[static_cast<std::size_t>(a)];
        int lb = local_[static_cast<std::size_t>(b)];
        comp_edges_.emplace_back(std::min(la, lb), std::max(la, lb));
      }
      std::sort(comp_edges_.begin(), comp_edges_.end());
      key_.clear();
      key_.push_back(static_cast<char>(count));
      for (auto [a, b] : comp_edges_) {
        key_.push_back(static_cast<char>(a));
        key_.push_back(static_cast<char>(b));
      }
      auto it = cache_.find(key_);
      if (it == cache_.end()) {
        it = cache_.emplace(key_, FaceSum(w_, count, comp_edges_).run()).first;
      }
      product_ *= it->second;
    }
    sum += product_;
  }

 private:
  const SlotLayout& lay_;
  const ScaledWeights& w_;
  std::vector<int> parent_, face_of_, comp_parent_, local_;
  std::vector<std::pair<int, int>> edges_, comp_edges_;
  std::string key_;
  std::unordered_map<std::string, Integer> cache_;
  Integer product_;
};

int first_unpaired(const std::vector<int>& partner) {
  for (std::size_t i = 0; i < partner.size(); ++i) {
    if (partner[i] < 0) return static_cast<int>(i);
  }
  return -1;
}

/// Calls visit(partner) for every perfect matching extending the partial one.
template <typename Visit>
void for_each_pairing(std::vector<int>& partner, Visit&& visit) {
  const int i = first_unpaired(partner);
  if (i < 0) {
    visit(partner);
    return;
  }
  const auto si = static_cast<std::size_t>(i);
  for (std::size_t j = si + 1; j < partner.size(); ++j) {
    if (partner[j] >= 0) continue;
    partner[si] = static_cast<int>(j);
    partner[j] = i;
    for_each_pairing(partner, visit);
    partner[si] = -1;
    partner[j] = -1;
  }
}

/// Partial matchings fixing the partners of the first `depth` unpaired slots.
std::vector<std::vector<int>> pairing_prefixes(int degree, int depth) {
  std::vector<std::vector<int>> out{std::vector<int>(static_cast<std::size_t>(degree), -1)};
  for (int level = 0; level < depth; ++level) {
    std::vector<std::vector<int>> next;
    for (const auto& prefix : out) {
      const int i = first_unpaired(prefix);
      if (i < 0) {
        next.push_back(prefix);
        continue;
      }
      for (int j = i + 1; j < degree; ++j) {
        if (prefix[static_cast<std::size_t>(j)] >= 0) continue;
        auto p = prefix;
        p[static_cast<std::size_t>(i)] = j;
        p[static_cast<std::size_t>(j)] = i;
        next.push_back(std::move(p));
      }
    }
    out = std::move(next);
  }
  return out;
}

Rational kernel_sum(std::span<const int> powers, const ExternalField& field, bool parallel) {
  const SlotLayout lay = make_layout(powers);
  const ScaledWeights w(field);
  const int depth = std::min(2, lay.degree / 2);
  const auto prefixes = pairing_prefixes(lay.degree, depth);
  std::vector<Integer> partial(prefixes.size());

#pragma omp parallel if (parallel)
  {
    PairingEvaluator eval(lay, w);
#pragma omp for schedule(dynamic)
    for (std::ptrdiff_t t = 0; t < static_cast<std::ptrdiff_t>(prefixes.size()); ++t) {
      auto partner = prefixes[static_cast<std::size_t>(t)];
      Integer sum = 0;
      for_each_pairing(partner, [&](const std::vector<int>& full) { eval.add(full, sum); });
      partial[static_cast<std::size_t>(t)] = std::move(sum);
    }
  }

  Integer total = 0;
  for (const auto& p : partial) total += p;
  Integer denom;
  mpz_pow_ui(denom.get_mpz_t(), w.scale.get_mpz_t(), static_cast<unsigned long>(lay.degree / 2));
  Rational out(total, denom);
  out.canonicalize();
  return out;
}

}  // namespace

Rational gaussian_trace_moment(std::span<const int> powers, const ExternalField& field,
                               const WickOptions& options) {
  int degree = 0;
  for (int p : powers) {
    if (p < 1) throw DomainError("trace powers must be positive");
    degree += p;
  }
  if (degree % 2) return 0;
  if (degree == 0) return 1;
  check_cap(degree, options);
  return kernel_sum(powers, field, options.parallel);
}

Rational gaussian_trace_moment_reference(std::span<const int> powers, const ExternalField& field,
                                         const WickOptions& options) {
  const SlotLayout lay = make_layout(powers);
  if (lay.degree % 2) return 0;
  if (lay.degree == 0) return 1;
  check_cap(lay.degree, options);
  const int n = field.size();

  Rational total = 0;
  std::vector<int> partner(static_cast<std::size_t>(lay.degree), -1);
  std::vector<int> parent, face_of;
  for_each_pairing(partner, [&](const std::vector<int>& full) {
    const int faces = label_faces(lay, full, parent, face_of);
    std::vector<int> assign(static_cast<std::size_t>(faces), 0);
    while (true) {
      Rational term = 1;
      for (int k = 0; k < lay.degree; ++k) {
        const int l = full[static_cast<std::size_t>(k)];
        if (l < k) continue;
        const int row_k = assign[static_cast<std::size_t>(face_of[static_cast<std::size_t>(k)])];
        const int col_k = assign[static_cast<std::size_t>(
            face_of[static_cast<std::size_t>(lay.col[static_cast<std::size_t>(k)])])];
        const int row_l = assign[static_cast<std::size_t>(face_of[static_cast<std::size_t>(l)])];
        const int col_l = assign[static_cast<std::size_t>(
            face_of[static_cast<std::size_t>(lay.col[static_cast<std::size_t>(l)])])];
        term *= covariance(row_k, col_k, row_l, col_l, field);
      }
      total += term;
      int f = 0;
      while (f < faces && ++assign[static_cast<std::size_t>(f)] == n) {
        assign[static_cast<std::size_t>(f)] = 0;
        ++f;
      }
      if (f == faces) break;
    }
  });
  return total;
}

namespace {

GSeries moment_impl(std::vector<int> key, int g_order,
                    const std::function<Rational(const std::vector<int>&)>& trace) {
  if (g_order < 0) throw DomainError("g-order must be non-negative");
  int degree = 0;
  for (int k : key) {
    if (k < 1) throw DomainError("moment key entries must be positive");
    degree += k;
  }
  if (degree % 2) return GSeries(g_order);
  GSeries num(g_order), den(g_order);
  std::vector<int> quartic;
  for (int p = 0; p <= g_order; ++p) {
    auto powers = key;
    powers.insert(powers.end(), quartic.begin(), quartic.end());
    try {
      num[p] = trace(powers) / factorial(p);
      den[p] = trace(quartic) / factorial(p);
    } catch (const CapExceeded& e) {
      throw CapExceeded("g-order " + std::to_string(p) + ": " + e.what(), e.estimated_cost());
    }
    quartic.push_back(4);
  }
  return num / den;
}

}  // namespace

GSeries moment(std::span<const int> key, const ExternalField& field, int g_order,
               const WickOptions& options) {
  return moment_impl(std::vector<int>(key.begin(), key.end()), g_order,
                     [&](const std::vector<int>& powers) {
                       return gaussian_trace_moment(powers, field, options);
                     });
}

GSeries moment(const OddPartition& key, const ExternalField& field, int g_order,
               const WickOptions& options) {
  return moment(std::span<const int>(key.parts()), field, g_order, options);
}

WickEngine::WickEngine(ExternalField field, WickOptions options)
    : field_(std::move(field)), options_(options) {}

const Rational& WickEngine::trace_moment(std::vector<int> powers) {
  std::sort(powers.begin(), powers.end(), std::greater<>());
  auto it = trace_cache_.find(powers);
  if (it == trace_cache_.end()) {
    Rational v = gaussian_trace_moment(powers, field_, options_);
    it = trace_cache_.emplace(std::move(powers), std::move(v)).first;
  }
  return it->second;
}

GSeries WickEngine::moment(const OddPartition& key, int g_order) {
  auto cache_key = std::pair(key, g_order);
  if (auto it = moment_cache_.find(cache_key); it != moment_cache_.end()) return it->second;
  GSeries value = moment_impl(key.parts(), g_order, [this](const std::vector<int>& powers) {
    return trace_moment(powers);
  });
  moment_cache_.emplace(std::move(cache_key), value);
  return value;
}

}  // namespace kmm
